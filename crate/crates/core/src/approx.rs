//! A 1/4-WEFX allocation for two weighted agents with additive valuations.
//!
//! After normalizing weights and each agent's total value to 1, the split
//! `A` maximizing `f(A) = min(v_1(A) - w_1, 0) + min(v_2(G \ A) - w_2, 0)`
//! (largest `|A|` on ties) either is WEFX outright or sits next to a
//! single-good allocation that is 1/4-WEFX.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::fairness::{check, Property};
use crate::model::{Allocation, Bundle, Instance};
use crate::rational::Rational;

/// Largest good count [`maximize_f`] scans exhaustively.
pub const MAX_SPLIT_GOODS: usize = 24;

/// The maximizing split: agent 1 takes `subset`, agent 2 the complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitObjective {
    pub subset: Bundle,
    pub f_value: Rational,
    pub cardinality: usize,
}

fn two_agent_rows<'a>(inst: &'a Instance, operation: &'static str) -> Result<Vec<&'a [Rational]>> {
    if inst.n() != 2 {
        return Err(Error::unsupported(operation, "exactly two agents"));
    }
    let rows = inst
        .additive_rows()
        .ok_or_else(|| Error::unsupported(operation, "additive valuations"))?;
    if !inst.is_weighted() {
        return Err(Error::MissingWeights(operation.into()));
    }
    Ok(rows)
}

/// Scales weights to sum 1 and each agent's values to total 1.
pub fn normalize_two_agent(inst: &Instance) -> Result<Instance> {
    let rows = two_agent_rows(inst, "two-agent normalization")?;
    let weights = inst.weights().expect("weighted");
    let weight_sum: Rational = weights.iter().sum();
    let mut normalized = Vec::with_capacity(2);
    for (i, row) in rows.iter().enumerate() {
        let total: Rational = row.iter().sum();
        if total.is_zero() {
            return Err(Error::Precondition(format!("agent {i} values every good at zero")));
        }
        normalized.push(row.iter().map(|v| v / &total).collect());
    }
    Instance::additive_rational(normalized)?.with_weights(weights.iter().map(|w| w / &weight_sum).collect())
}

fn f_of(rows: &[&[Rational]], w: &[Rational], subset: Bundle, m: usize) -> Rational {
    let zero = Rational::zero();
    let own: Rational = subset.iter().map(|g| &rows[0][g]).sum();
    let rest: Rational = (0..m).filter(|&g| !subset.contains(g)).map(|g| &rows[1][g]).sum();
    (own - &w[0]).min(zero.clone()) + (rest - &w[1]).min(zero)
}

/// Every normalized quantity as an `i64` numerator over one common denominator.
fn integer_scale(rows: &[&[Rational]], w: &[Rational]) -> Option<(Vec<Vec<i128>>, [i128; 2], Rational)> {
    let denom = Rational::common_denominator(rows.iter().flat_map(|r| r.iter()).chain(w.iter()));
    let to_int = |x: &Rational| -> Option<i128> {
        let scaled = x.numer() * (&denom / x.denom());
        scaled.to_i64().map(i128::from)
    };
    let ints = rows
        .iter()
        .map(|r| r.iter().map(to_int).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Some((ints, [to_int(&w[0])?, to_int(&w[1])?], Rational::from_bigint(denom)))
}

/// Exhaustive maximization of `f` over all `2^m` subsets on a normalized
/// instance; ties go to the larger subset, then the lower bitmask.
pub fn maximize_f(inst: &Instance) -> Result<SplitObjective> {
    let rows = two_agent_rows(inst, "split maximization")?;
    let m = inst.m();
    if m > MAX_SPLIT_GOODS {
        return Err(Error::CapExceeded {
            requested: format!("2^{m} subsets"),
            cap: 1 << MAX_SPLIT_GOODS,
        });
    }
    let w = inst.weights().expect("weighted");
    let mut best: Option<(Rational, usize, u64)> = None;
    if let Some((ints, wi, denom)) = integer_scale(&rows, w) {
        let total2: i128 = ints[1].iter().sum();
        let mut best_int: Option<(i128, usize, u64)> = None;
        for mask in 0..(1u64 << m) {
            let (mut own, mut taken) = (0i128, 0i128);
            for g in Bundle::from_mask(mask).iter() {
                own += ints[0][g];
                taken += ints[1][g];
            }
            let f = (own - wi[0]).min(0) + (total2 - taken - wi[1]).min(0);
            let card = mask.count_ones() as usize;
            if best_int.is_none_or(|(bf, bc, _)| (f, card) > (bf, bc)) {
                best_int = Some((f, card, mask));
            }
        }
        let (f, card, mask) = best_int.expect("at least the empty subset");
        best = Some((Rational::from_bigint(f.into()) / denom, card, mask));
    } else {
        for mask in 0..(1u64 << m) {
            let f = f_of(&rows, w, Bundle::from_mask(mask), m);
            let card = mask.count_ones() as usize;
            if best.as_ref().is_none_or(|(bf, bc, _)| (&f, card) > (bf, *bc)) {
                best = Some((f, card, mask));
            }
        }
    }
    let (f_value, cardinality, mask) = best.expect("at least the empty subset");
    Ok(SplitObjective {
        subset: Bundle::from_mask(mask),
        f_value,
        cardinality,
    })
}

/// Which candidate family produced a [`quarter_wefx`] allocation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateSource {
    /// The maximizing split itself.
    Split,
    /// A single-good allocation singled out by the case analysis.
    ProofGood(usize),
    /// A single-good allocation outside the case analysis.
    Fallback(usize),
    /// One agent values nothing, so the other takes everything.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarterWefxRun {
    pub allocation: Allocation,
    pub objective: Option<SplitObjective>,
    pub source: CandidateSource,
}

impl QuarterWefxRun {
    pub fn fallback_used(&self) -> bool {
        matches!(self.source, CandidateSource::Fallback(_))
    }
}

pub fn quarter_wefx(inst: &Instance) -> Result<Allocation> {
    Ok(quarter_wefx_run(inst)?.allocation)
}

pub fn quarter_wefx_run(inst: &Instance) -> Result<QuarterWefxRun> {
    let rows = two_agent_rows(inst, "the 1/4-WEFX algorithm")?;
    let m = inst.m();
    let all = inst.all_goods();
    let totals: Vec<Rational> = rows.iter().map(|r| r.iter().sum()).collect();
    if let Some(idle) = (0..2).find(|&i| totals[i].is_zero()) {
        let mut bundles = vec![Bundle::EMPTY; 2];
        bundles[1 - idle] = all;
        return Ok(QuarterWefxRun {
            allocation: Allocation::new(bundles),
            objective: None,
            source: CandidateSource::Degenerate,
        });
    }

    let norm = normalize_two_agent(inst)?;
    let objective = maximize_f(&norm)?;
    let a = objective.subset;
    let split = Allocation::new(vec![a, all.difference(a)]);
    if objective.f_value.is_zero() {
        return Ok(QuarterWefxRun {
            allocation: split,
            objective: Some(objective),
            source: CandidateSource::Split,
        });
    }

    let quarter = Property::AlphaWefx(Rational::new(1, 4));
    let passes = |alloc: &Allocation| -> Result<bool> { Ok(check(inst, alloc, &quarter)?.holds) };
    if passes(&split)? {
        return Ok(QuarterWefxRun {
            allocation: split,
            objective: Some(objective),
            source: CandidateSource::Split,
        });
    }

    let nrows = norm.additive_rows().expect("additive");
    let nw = norm.weights().expect("weighted");
    let single = |agent: usize, g: usize| -> Allocation {
        let mut bundles = vec![all.without(g); 2];
        bundles[agent] = Bundle::singleton(g);
        Allocation::new(bundles)
    };
    // (agent, good): that agent alone takes the good.
    let mut proof: Vec<(usize, usize)> = Vec::new();
    for g in all.difference(a).iter().filter(|&g| nrows[0][g] > nrows[1][g]) {
        proof.push((0, g));
    }
    for g in a.iter().filter(|&g| nrows[1][g] > nrows[0][g]) {
        proof.push((1, g));
    }
    for g in all.difference(a).iter().filter(|&g| nrows[1][g] < nw[1]) {
        proof.push((0, g));
    }
    for g in a.iter().filter(|&g| nrows[0][g] < nw[0]) {
        proof.push((1, g));
    }
    for &(agent, g) in &proof {
        let alloc = single(agent, g);
        if passes(&alloc)? {
            return Ok(QuarterWefxRun {
                allocation: alloc,
                objective: Some(objective),
                source: CandidateSource::ProofGood(g),
            });
        }
    }
    for g in 0..m {
        for agent in 0..2 {
            let alloc = single(agent, g);
            if passes(&alloc)? {
                return Ok(QuarterWefxRun {
                    allocation: alloc,
                    objective: Some(objective),
                    source: CandidateSource::Fallback(g),
                });
            }
        }
    }
    Err(Error::Invariant("no 1/4-WEFX candidate found".into()))
}
