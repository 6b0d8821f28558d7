//! Exact evaluation backends shared by the checkers, the enumerator and the
//! brute-force optimizers.
//!
//! [`Evaluator`] abstracts "value of a bundle" and "weight of an agent" over a
//! scalar type. [`IntKernel`] rescales every agent's valuation (and the
//! weights) to integers and works in `i128`; it is only built when the
//! rescaled magnitudes leave enough headroom for the cross-multiplied
//! comparisons below, so it stays exact. [`ExactEval`] evaluates directly in
//! [`Rational`] and is the fallback for everything else.

use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::model::{Bundle, Instance, Valuation};
use crate::rational::Rational;

/// Scalars comfortably below this bound can be multiplied three at a time in i128.
const HEADROOM: i128 = 1 << 40;

/// Largest `m` for which additive valuations are tabulated over all subsets.
const TABULATE_MAX_GOODS: usize = 16;

pub(crate) trait Evaluator {
    type Scalar: Clone + Ord + Add<Output = Self::Scalar> + Mul<Output = Self::Scalar>;

    fn n(&self) -> usize;
    fn m(&self) -> usize;
    fn value(&self, agent: usize, bundle: Bundle) -> Self::Scalar;
    fn weight(&self, agent: usize) -> Self::Scalar;
    /// `(p, q)` with `p / q == r`, q > 0; `None` if not representable.
    fn ratio(&self, r: &Rational) -> Option<(Self::Scalar, Self::Scalar)>;

    /// `lhs / w_a >= alpha * rhs / w_b`, with `alpha = p / q`.
    fn weighted_ge(
        &self,
        lhs: Self::Scalar,
        a: usize,
        rhs: Self::Scalar,
        b: usize,
        alpha: &(Self::Scalar, Self::Scalar),
    ) -> bool {
        let (p, q) = alpha;
        lhs * self.weight(b) * q.clone() >= p.clone() * rhs * self.weight(a)
    }
}

/// Direct rational evaluation.
pub(crate) struct ExactEval<'a>(pub &'a Instance);

impl Evaluator for ExactEval<'_> {
    type Scalar = Rational;

    fn n(&self) -> usize {
        self.0.n()
    }

    fn m(&self) -> usize {
        self.0.m()
    }

    fn value(&self, agent: usize, bundle: Bundle) -> Rational {
        self.0.v(agent, bundle)
    }

    fn weight(&self, agent: usize) -> Rational {
        self.0.weight(agent)
    }

    fn ratio(&self, r: &Rational) -> Option<(Rational, Rational)> {
        Some((r.clone(), Rational::one()))
    }
}

enum AgentValues {
    Tabulated(Vec<i128>),
    Additive(Vec<i128>),
    Budget { values: Vec<i128>, cap: i128 },
}

/// Integer-rescaled evaluation in i128.
pub(crate) struct IntKernel {
    n: usize,
    m: usize,
    agents: Vec<AgentValues>,
    weights: Vec<i128>,
}

fn to_small(x: &BigInt) -> Option<i128> {
    x.to_i128().filter(|v| v.abs() < HEADROOM)
}

fn scale_all(values: &[Rational], extra: Option<&Rational>) -> Option<(Vec<i128>, Option<i128>)> {
    let lcm = Rational::common_denominator(values.iter().chain(extra));
    let scale = |v: &Rational| -> Option<i128> {
        let scaled = v.numer() * (&lcm / v.denom());
        to_small(&scaled)
    };
    let scaled = values.iter().map(scale).collect::<Option<Vec<_>>>()?;
    let extra = match extra {
        Some(e) => Some(scale(e)?),
        None => None,
    };
    Some((scaled, extra))
}

impl IntKernel {
    /// Builds the kernel, or `None` when the rescaled magnitudes are too large
    /// for exact i128 comparisons. `tabulate` precomputes every subset value
    /// for small additive instances.
    pub(crate) fn new(inst: &Instance, tabulate: bool) -> Option<Self> {
        let m = inst.m();
        let mut agents = Vec::with_capacity(inst.n());
        for v in inst.valuations() {
            let entry = match v {
                Valuation::Additive(values) => {
                    let (scaled, _) = scale_all(values, None)?;
                    if scaled.iter().sum::<i128>() >= HEADROOM {
                        return None;
                    }
                    if tabulate && m <= TABULATE_MAX_GOODS {
                        AgentValues::Tabulated(subset_sums(&scaled))
                    } else {
                        AgentValues::Additive(scaled)
                    }
                }
                Valuation::BudgetAdditive { values, cap } => {
                    let (scaled, cap) = scale_all(values, Some(cap))?;
                    if scaled.iter().sum::<i128>() >= HEADROOM {
                        return None;
                    }
                    let cap = cap.expect("cap was scaled");
                    if tabulate && m <= TABULATE_MAX_GOODS {
                        AgentValues::Tabulated(subset_sums(&scaled).into_iter().map(|s| s.min(cap)).collect())
                    } else {
                        AgentValues::Budget { values: scaled, cap }
                    }
                }
                Valuation::Table(table) => AgentValues::Tabulated(scale_all(table, None)?.0),
            };
            agents.push(entry);
        }
        let weights = match inst.weights() {
            Some(w) => scale_all(w, None)?.0,
            None => vec![1; inst.n()],
        };
        Some(IntKernel {
            n: inst.n(),
            m,
            agents,
            weights,
        })
    }
}

fn subset_sums(values: &[i128]) -> Vec<i128> {
    let mut sums = vec![0i128; 1usize << values.len()];
    for mask in 1..sums.len() {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + values[low];
    }
    sums
}

impl Evaluator for IntKernel {
    type Scalar = i128;

    fn n(&self) -> usize {
        self.n
    }

    fn m(&self) -> usize {
        self.m
    }

    #[inline]
    fn value(&self, agent: usize, bundle: Bundle) -> i128 {
        match &self.agents[agent] {
            AgentValues::Tabulated(t) => t[bundle.mask() as usize],
            AgentValues::Additive(v) => bundle.iter().map(|g| v[g]).sum(),
            AgentValues::Budget { values, cap } => bundle.iter().map(|g| values[g]).sum::<i128>().min(*cap),
        }
    }

    #[inline]
    fn weight(&self, agent: usize) -> i128 {
        self.weights[agent]
    }

    fn ratio(&self, r: &Rational) -> Option<(i128, i128)> {
        Some((to_small(r.numer())?, to_small(r.denom())?))
    }
}
