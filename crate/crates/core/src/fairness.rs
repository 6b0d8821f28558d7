//! Fairness and efficiency checkers, envy graphs and envy-cycle elimination.
//!
//! All checks quantify over every ordered pair of distinct agents and, where a
//! pivotal good is involved, over every good of the envied bundle, zero-valued
//! goods included. Partial allocations are checked over the allocated goods only.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde_json::json;

use crate::enumeration::{checked_allocation_count, Odometer, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::io::allocation_to_value;
use crate::kernel::{Evaluator, ExactEval, IntKernel};
use crate::model::{validate_allocation, Allocation, Bundle, Instance};
use crate::rational::Rational;

/// A fairness or efficiency notion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Ef,
    Ef1,
    Efx,
    EfxPlus,
    Po,
    /// `v_i(A_i) / w_i >= v_i(A_j) / w_j`.
    Wef,
    Wefx,
    Wwefx,
    /// WEFX with the right-hand side scaled by `alpha` in `[0, 1]`.
    AlphaWefx(Rational),
}

impl Property {
    pub fn alpha_wefx(alpha: Rational) -> Result<Self> {
        if alpha.is_negative() || alpha > 1 {
            return Err(Error::Precondition(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        Ok(Property::AlphaWefx(alpha))
    }

    /// Whether the property reads agent weights.
    pub fn is_weighted(&self) -> bool {
        matches!(
            self,
            Property::Wef | Property::Wefx | Property::Wwefx | Property::AlphaWefx(_)
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Property::Ef => "ef",
            Property::Ef1 => "ef1",
            Property::Efx => "efx",
            Property::EfxPlus => "efx-plus",
            Property::Po => "po",
            Property::Wef => "wef",
            Property::Wefx => "wefx",
            Property::Wwefx => "wwefx",
            Property::AlphaWefx(_) => "alpha-wefx",
        }
    }

    /// Parses a property name; `alpha-wefx` takes its factor from `alpha`.
    pub fn parse(name: &str, alpha: Option<Rational>) -> Result<Self> {
        let prop = match name.trim().to_ascii_lowercase().as_str() {
            "ef" => Property::Ef,
            "ef1" => Property::Ef1,
            "efx" => Property::Efx,
            "efx-plus" | "efx+" | "efxplus" => Property::EfxPlus,
            "po" => Property::Po,
            "wef" => Property::Wef,
            "wefx" => Property::Wefx,
            "wwefx" => Property::Wwefx,
            "alpha-wefx" => {
                let alpha = alpha.ok_or_else(|| Error::Precondition("alpha-wefx needs an alpha".into()))?;
                return Property::alpha_wefx(alpha);
            }
            other => return Err(Error::Precondition(format!("unknown property `{other}`"))),
        };
        if alpha.is_some() {
            return Err(Error::Precondition(format!("alpha only applies to alpha-wefx, not {name}")));
        }
        Ok(prop)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::AlphaWefx(a) => write!(f, "alpha-wefx({a})"),
            p => f.write_str(p.name()),
        }
    }
}

impl FromStr for Property {
    type Err = Error;

    /// Accepts the plain names and `alpha-wefx(p/q)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("alpha-wefx(").and_then(|r| r.strip_suffix(')')) {
            let alpha = inner
                .parse::<Rational>()
                .map_err(|e| Error::Precondition(e.to_string()))?;
            return Property::alpha_wefx(alpha);
        }
        Property::parse(s, None)
    }
}

/// A violated pair: `envier` envies `envied`, optionally despite removing
/// (or, for add-side notions, adding) `good`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    pub envier: usize,
    pub envied: usize,
    pub good: Option<usize>,
}

/// Outcome of [`check`]. A failing report always carries a witness, or a
/// dominating allocation for PO.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairnessReport {
    pub holds: bool,
    pub witness: Option<Witness>,
    pub dominator: Option<Allocation>,
}

impl FairnessReport {
    fn pass() -> Self {
        FairnessReport {
            holds: true,
            witness: None,
            dominator: None,
        }
    }

    fn from_witness(w: Option<Witness>) -> Self {
        FairnessReport {
            holds: w.is_none(),
            witness: w,
            dominator: None,
        }
    }

    pub fn to_json(&self, prop: &Property) -> serde_json::Value {
        json!({
            "property": prop.to_string(),
            "holds": self.holds,
            "witness": self.witness.map(|w| json!({
                "envier": w.envier,
                "envied": w.envied,
                "good": w.good,
            })),
            "dominator": self.dominator.as_ref().map(allocation_to_value),
        })
    }
}

/// The pairwise rule of a non-PO property, with `alpha` pre-converted to the
/// evaluator's scalar.
pub(crate) enum Rule<S> {
    Ef,
    Ef1,
    Efx,
    EfxPlus,
    Weighted { remove_good: bool, alpha: (S, S) },
    Wwefx { one: (S, S) },
}

impl<S: Clone> Rule<S> {
    /// `None` when `prop` is PO or `alpha` cannot be represented by `ev`.
    pub(crate) fn new<E: Evaluator<Scalar = S>>(ev: &E, prop: &Property) -> Option<Self> {
        let one = || ev.ratio(&Rational::one());
        Some(match prop {
            Property::Ef => Rule::Ef,
            Property::Ef1 => Rule::Ef1,
            Property::Efx => Rule::Efx,
            Property::EfxPlus => Rule::EfxPlus,
            Property::Po => return None,
            Property::Wef => Rule::Weighted {
                remove_good: false,
                alpha: one()?,
            },
            Property::Wefx => Rule::Weighted {
                remove_good: true,
                alpha: one()?,
            },
            Property::AlphaWefx(a) => Rule::Weighted {
                remove_good: true,
                alpha: ev.ratio(a)?,
            },
            Property::Wwefx => Rule::Wwefx { one: one()? },
        })
    }
}

/// First violated `(i, j, g)` in agent-then-good order, or `None` if the rule holds.
pub(crate) fn find_violation<E: Evaluator>(ev: &E, bundles: &[Bundle], rule: &Rule<E::Scalar>) -> Option<Witness> {
    let n = bundles.len();
    for i in 0..n {
        let own = ev.value(i, bundles[i]);
        for j in 0..n {
            if i == j || bundles[j].is_empty() {
                continue;
            }
            if let Some(w) = pair_violation(ev, i, j, &own, bundles[i], bundles[j], rule) {
                return Some(w);
            }
        }
    }
    None
}

fn pair_violation<E: Evaluator>(
    ev: &E,
    i: usize,
    j: usize,
    own: &E::Scalar,
    mine: Bundle,
    theirs: Bundle,
    rule: &Rule<E::Scalar>,
) -> Option<Witness> {
    let witness = |good| Some(Witness { envier: i, envied: j, good });
    let other = ev.value(i, theirs);
    match rule {
        Rule::Ef => (*own < other).then(|| witness(None)).flatten(),
        Rule::Ef1 => {
            if *own >= other || theirs.iter().any(|g| *own >= ev.value(i, theirs.without(g))) {
                None
            } else {
                witness(None)
            }
        }
        Rule::Efx => {
            if *own >= other {
                return None;
            }
            theirs
                .iter()
                .find(|&g| *own < ev.value(i, theirs.without(g)))
                .and_then(|g| witness(Some(g)))
        }
        Rule::EfxPlus => {
            if *own >= other {
                return None;
            }
            theirs
                .iter()
                .find(|&g| ev.value(i, mine.with(g)) < other)
                .and_then(|g| witness(Some(g)))
        }
        Rule::Weighted { remove_good, alpha } => {
            if ev.weighted_ge(own.clone(), i, other, j, alpha) {
                return None;
            }
            if !remove_good {
                return witness(None);
            }
            theirs
                .iter()
                .find(|&g| !ev.weighted_ge(own.clone(), i, ev.value(i, theirs.without(g)), j, alpha))
                .and_then(|g| witness(Some(g)))
        }
        Rule::Wwefx { one } => {
            if ev.weighted_ge(own.clone(), i, other.clone(), j, one) {
                return None;
            }
            theirs
                .iter()
                .find(|&g| {
                    !ev.weighted_ge(own.clone(), i, ev.value(i, theirs.without(g)), j, one)
                        && !ev.weighted_ge(ev.value(i, mine.with(g)), i, other.clone(), j, one)
                })
                .and_then(|g| witness(Some(g)))
        }
    }
}

pub(crate) fn require_weights(inst: &Instance, prop: &Property) -> Result<()> {
    if prop.is_weighted() && !inst.is_weighted() {
        return Err(Error::MissingWeights(prop.to_string()));
    }
    Ok(())
}

/// Decides `prop` for `alloc`. PO uses the default enumeration cap.
pub fn check(inst: &Instance, alloc: &Allocation, prop: &Property) -> Result<FairnessReport> {
    check_with_cap(inst, alloc, prop, DEFAULT_CAP)
}

/// As [`check`], with an explicit cap on the allocations a PO search may visit.
pub fn check_with_cap(inst: &Instance, alloc: &Allocation, prop: &Property, cap: u64) -> Result<FairnessReport> {
    require_weights(inst, prop)?;
    validate_allocation(inst, alloc, false)?;
    if *prop == Property::Po {
        return check_po(inst, alloc, cap);
    }
    if let Some(k) = IntKernel::new(inst, false) {
        if let Some(rule) = Rule::new(&k, prop) {
            return Ok(FairnessReport::from_witness(find_violation(&k, alloc.bundles(), &rule)));
        }
    }
    let ev = ExactEval(inst);
    let rule = Rule::new(&ev, prop).expect("rational evaluation represents every alpha");
    Ok(FairnessReport::from_witness(find_violation(&ev, alloc.bundles(), &rule)))
}

fn check_po(inst: &Instance, alloc: &Allocation, cap: u64) -> Result<FairnessReport> {
    if inst.is_binary_additive() {
        return Ok(po_binary_additive(inst, alloc));
    }
    checked_allocation_count(inst.n(), inst.m(), cap)?;
    let dominator = match IntKernel::new(inst, true) {
        Some(k) => find_dominator(&k, alloc),
        None => find_dominator(&ExactEval(inst), alloc),
    };
    Ok(FairnessReport {
        holds: dominator.is_none(),
        witness: None,
        dominator,
    })
}

/// Binary additive: PO iff no good sits with an agent (or nobody) valuing it 0
/// while another agent values it 1.
fn po_binary_additive(inst: &Instance, alloc: &Allocation) -> FairnessReport {
    let rows = inst.additive_rows().expect("binary additive");
    for g in 0..inst.m() {
        let owner = alloc.owner_of(g);
        if owner.is_some_and(|o| rows[o][g].is_one()) {
            continue;
        }
        if let Some(k) = (0..inst.n()).find(|&k| rows[k][g].is_one()) {
            let mut dominator = alloc.clone();
            if let Some(o) = owner {
                dominator.bundles_mut()[o].remove(g);
            }
            dominator.bundles_mut()[k].insert(g);
            return FairnessReport {
                holds: false,
                witness: None,
                dominator: Some(dominator),
            };
        }
    }
    FairnessReport::pass()
}

fn find_dominator<E: Evaluator>(ev: &E, alloc: &Allocation) -> Option<Allocation> {
    let base: Vec<E::Scalar> = (0..ev.n()).map(|i| ev.value(i, alloc.bundle(i))).collect();
    let mut odo = Odometer::new(ev.n(), ev.m(), 0);
    loop {
        if dominates(ev, odo.bundles(), &base) {
            return Some(Allocation::new(odo.bundles().to_vec()));
        }
        if !odo.advance() {
            return None;
        }
    }
}

/// Whether `bundles` gives every agent at least `base` and someone strictly more.
pub(crate) fn dominates<E: Evaluator>(ev: &E, bundles: &[Bundle], base: &[E::Scalar]) -> bool {
    let mut strict = false;
    for (i, b) in base.iter().enumerate() {
        let v = ev.value(i, bundles[i]);
        match v.cmp(b) {
            std::cmp::Ordering::Less => return false,
            std::cmp::Ordering::Greater => strict = true,
            std::cmp::Ordering::Equal => {}
        }
    }
    strict
}

/// Re-evaluates a witness: true iff it exhibits a genuine violation of `prop`.
pub fn verify_witness(inst: &Instance, alloc: &Allocation, prop: &Property, w: &Witness) -> Result<bool> {
    require_weights(inst, prop)?;
    let (i, j) = (w.envier, w.envied);
    if i >= inst.n() || j >= inst.n() || i == j {
        return Ok(false);
    }
    let ev = ExactEval(inst);
    let Some(rule) = Rule::new(&ev, prop) else {
        return Ok(false);
    };
    let (mine, theirs) = (alloc.bundle(i), alloc.bundle(j));
    let own = inst.v(i, mine);
    let other = inst.v(i, theirs);
    let ge = |lhs: Rational, rhs: Rational, alpha: &(Rational, Rational)| ev.weighted_ge(lhs, i, rhs, j, alpha);
    Ok(match (&rule, w.good) {
        (Rule::Ef, None) => own < other,
        (Rule::Ef1, None) => {
            !theirs.is_empty() && theirs.iter().all(|g| own < inst.v(i, theirs.without(g)))
        }
        (Rule::Efx, Some(g)) => theirs.contains(g) && own < inst.v(i, theirs.without(g)),
        (Rule::EfxPlus, Some(g)) => theirs.contains(g) && inst.v(i, mine.with(g)) < other,
        (Rule::Weighted { remove_good: false, alpha }, None) => !ge(own, other, alpha),
        (Rule::Weighted { remove_good: true, alpha }, Some(g)) => {
            theirs.contains(g) && !ge(own, inst.v(i, theirs.without(g)), alpha)
        }
        (Rule::Wwefx { one }, Some(g)) => {
            theirs.contains(g)
                && !ge(own, inst.v(i, theirs.without(g)), one)
                && !ge(inst.v(i, mine.with(g)), other, one)
        }
        _ => false,
    })
}

/// True iff `dominator` is a valid allocation that Pareto-dominates `alloc`.
pub fn verify_dominator(inst: &Instance, alloc: &Allocation, dominator: &Allocation) -> bool {
    if validate_allocation(inst, dominator, false).is_err() {
        return false;
    }
    let base = alloc.own_values(inst);
    dominates(&ExactEval(inst), dominator.bundles(), &base)
}

/// Directed envy graph: an edge `(i, j)` means `v_i(A_i) < v_i(A_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvyGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl EnvyGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        EnvyGraph {
            n,
            edges: edges.into_iter().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn envies(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    /// Agents envied by `i`, in increasing order.
    pub fn envied_by(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((i, 0)..(i + 1, 0)).map(|&(_, j)| j)
    }

    /// Agents envying `j`, in increasing order.
    pub fn enviers_of(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |&&(_, t)| t == j).map(|&(i, _)| i)
    }

    pub fn is_envied(&self, j: usize) -> bool {
        self.edges.iter().any(|&(_, t)| t == j)
    }

    pub fn unenvied(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| !self.is_envied(j)).collect()
    }

    /// A cycle `c_0 -> c_1 -> ... -> c_0` through the lowest-indexed agent
    /// lying on any cycle, found by depth-first search in increasing target order.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        for start in 0..self.n {
            let mut path = vec![start];
            let mut on_path = vec![false; self.n];
            let mut done = vec![false; self.n];
            on_path[start] = true;
            if self.dfs_cycle(start, start, &mut path, &mut on_path, &mut done) {
                return Some(path);
            }
        }
        None
    }

    fn dfs_cycle(&self, start: usize, u: usize, path: &mut Vec<usize>, on_path: &mut [bool], done: &mut [bool]) -> bool {
        for v in self.envied_by(u) {
            if v == start {
                return true;
            }
            // Agents below `start` lie on no cycle, or a cycle would have been found earlier.
            if v < start || on_path[v] || done[v] {
                continue;
            }
            path.push(v);
            on_path[v] = true;
            if self.dfs_cycle(start, v, path, on_path, done) {
                return true;
            }
            on_path[v] = false;
            done[v] = true;
            path.pop();
        }
        false
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }
}

pub fn envy_graph(inst: &Instance, alloc: &Allocation) -> EnvyGraph {
    envy_graph_with(inst.n(), |i, b| inst.v(i, b), alloc.bundles())
}

/// Envy graph for an arbitrary per-agent bundle evaluator.
pub(crate) fn envy_graph_with<T: Ord, B: Copy>(n: usize, value: impl Fn(usize, B) -> T, bundles: &[B]) -> EnvyGraph {
    let mut edges = BTreeSet::new();
    for i in 0..n {
        let own = value(i, bundles[i]);
        for (j, b) in bundles.iter().enumerate() {
            if i != j && own < value(i, *b) {
                edges.insert((i, j));
            }
        }
    }
    EnvyGraph { n, edges }
}

/// Rotates bundles along envy cycles until the envy graph is acyclic.
pub fn eliminate_envy_cycles(inst: &Instance, alloc: &Allocation) -> Allocation {
    let mut bundles = alloc.bundles().to_vec();
    eliminate_cycles_with(inst.n(), |i, b| inst.v(i, b), &mut bundles);
    Allocation::new(bundles)
}

/// Each agent on a cycle takes the bundle of the agent it envies.
pub(crate) fn eliminate_cycles_with<T: Ord, B: Copy>(n: usize, value: impl Fn(usize, B) -> T, bundles: &mut [B]) {
    while let Some(cycle) = envy_graph_with(n, &value, bundles).find_cycle() {
        let taken: Vec<B> = cycle
            .iter()
            .enumerate()
            .map(|(k, _)| bundles[cycle[(k + 1) % cycle.len()]])
            .collect();
        for (agent, b) in cycle.iter().zip(taken) {
            bundles[*agent] = b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn remark1_n2() -> Instance {
        Instance::additive(&[vec![1, 0, 0, 0], vec![1, 0, 0, 0]]).unwrap()
    }

    #[test]
    fn efx_holds_on_remark1_split() {
        let inst = remark1_n2();
        let a = Allocation::from_goods(&[&[0], &[1, 2, 3]]);
        assert!(check(&inst, &a, &Property::Efx).unwrap().holds);
    }

    #[test]
    fn efx_fails_with_zero_good_witness() {
        let inst = remark1_n2();
        let a = Allocation::from_goods(&[&[0, 1], &[2, 3]]);
        let r = check(&inst, &a, &Property::Efx).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!(w, Witness { envier: 1, envied: 0, good: Some(1) });
        assert!(verify_witness(&inst, &a, &Property::Efx, &w).unwrap());
    }

    #[test]
    fn one_good_each_is_efx() {
        let inst = Instance::additive(&[vec![5, 1, 9], vec![2, 8, 1], vec![3, 3, 3]]).unwrap();
        let a = Allocation::from_goods(&[&[1], &[2], &[0]]);
        assert!(check(&inst, &a, &Property::Efx).unwrap().holds);
    }

    #[test]
    fn wwefx_fails_on_budget_instance() {
        let budget = crate::model::Valuation::BudgetAdditive {
            values: vec![Rational::one(); 7],
            cap: Rational::from(2),
        };
        let inst = Instance::new(
            7,
            vec![crate::model::Valuation::additive_from_ints(&[1; 7]), budget],
            Some(vec![Rational::from(2), Rational::from(5)]),
        )
        .unwrap();
        let a = Allocation::from_goods(&[&[0, 1], &[2, 3, 4, 5, 6]]);
        let r = check(&inst, &a, &Property::Wwefx).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap().envier, 1);
    }

    #[test]
    fn weighted_property_needs_weights() {
        let inst = remark1_n2();
        let a = Allocation::from_goods(&[&[0], &[1, 2, 3]]);
        assert!(matches!(check(&inst, &a, &Property::Wefx), Err(Error::MissingWeights(_))));
    }

    #[test]
    fn po_exhaustive_and_fast_path_agree() {
        let binary = Instance::additive(&[vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        let not_po = Allocation::from_goods(&[&[1], &[0, 2]]);
        let r = check(&binary, &not_po, &Property::Po).unwrap();
        assert!(!r.holds);
        assert!(verify_dominator(&binary, &not_po, r.dominator.as_ref().unwrap()));

        let general = Instance::additive(&[vec![2, 1], vec![1, 2]]).unwrap();
        let swapped = Allocation::from_goods(&[&[1], &[0]]);
        let r = check(&general, &swapped, &Property::Po).unwrap();
        assert!(!r.holds);
        assert_eq!(r.dominator.unwrap(), Allocation::from_goods(&[&[0], &[1]]));
        assert!(check(&general, &Allocation::from_goods(&[&[0], &[1]]), &Property::Po).unwrap().holds);
    }

    #[test]
    fn po_respects_cap() {
        let inst = Instance::additive(&[vec![3; 10], vec![2; 10]]).unwrap();
        let a = Allocation::from_goods(&[&[0], &[1]]);
        assert!(matches!(
            check_with_cap(&inst, &a, &Property::Po, 100),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn envy_graph_edges() {
        let inst = remark1_n2();
        let g = envy_graph(&inst, &Allocation::from_goods(&[&[1], &[0, 2, 3]]));
        assert_eq!(g.edges().iter().copied().collect::<Vec<_>>(), vec![(0, 1)]);
        let partial = envy_graph(&inst, &Allocation::from_goods(&[&[0], &[]]));
        assert_eq!(partial.edges().iter().copied().collect::<Vec<_>>(), vec![(1, 0)]);
        let ef = Instance::additive(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(envy_graph(&ef, &Allocation::from_goods(&[&[0], &[1]])).edges().is_empty());
    }

    #[test]
    fn mutual_envy_swaps() {
        let inst = Instance::additive(&[vec![1, 2], vec![2, 1]]).unwrap();
        let a = Allocation::from_goods(&[&[0], &[1]]);
        assert_eq!(eliminate_envy_cycles(&inst, &a), Allocation::from_goods(&[&[1], &[0]]));
        let acyclic = Allocation::from_goods(&[&[1], &[0]]);
        assert_eq!(eliminate_envy_cycles(&inst, &acyclic), acyclic);
    }

    #[test]
    fn cycle_search_prefers_lowest_agent() {
        let g = EnvyGraph::from_edges(4, [(1, 2), (2, 1), (0, 3), (3, 0)]);
        assert_eq!(g.find_cycle(), Some(vec![0, 3]));
        let g = EnvyGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 1)]);
        assert_eq!(g.find_cycle(), Some(vec![1, 2, 3]));
    }

    #[test]
    fn property_names_round_trip() {
        for p in [
            Property::Ef,
            Property::Ef1,
            Property::Efx,
            Property::EfxPlus,
            Property::Po,
            Property::Wef,
            Property::Wefx,
            Property::Wwefx,
            Property::AlphaWefx(Rational::new(1, 4)),
        ] {
            assert_eq!(p.to_string().parse::<Property>().unwrap(), p);
        }
        assert!(Property::alpha_wefx(Rational::new(5, 4)).is_err());
        assert!(Property::parse("efx", Some(Rational::one())).is_err());
    }

    #[test]
    fn efx_plus_differs_from_efx_on_monotone_table() {
        let table = [0, 1, 2, 5, 3, 6, 4, 7].map(Rational::from).to_vec();
        let v = crate::model::Valuation::Table(table);
        let inst = Instance::new(3, vec![v.clone(), v], None).unwrap();
        let a = Allocation::from_goods(&[&[0], &[1, 2]]);
        assert!(check(&inst, &a, &Property::EfxPlus).unwrap().holds);
        assert!(!check(&inst, &a, &Property::Efx).unwrap().holds);
        let b = Allocation::from_goods(&[&[2], &[0, 1]]);
        assert!(check(&inst, &b, &Property::Efx).unwrap().holds);
        assert!(!check(&inst, &b, &Property::EfxPlus).unwrap().holds);
    }
}
