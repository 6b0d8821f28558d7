//! Exhaustive iteration over complete allocations, property counting, the
//! join graph at `m = n + 2`, and randomized minimum-count search.
//!
//! Allocation `index` in `[0, n^m)` gives good `g` to agent `(index / n^g) mod n`.

use std::collections::BTreeMap;
use std::thread;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fairness::{check, find_violation, require_weights, Property, Rule};
use crate::gen::random_additive;
use crate::io::instance_to_value;
use crate::kernel::{Evaluator, ExactEval, IntKernel};
use crate::model::{Allocation, Bundle, Instance};

/// Default bound on the number of allocations a single enumeration may visit.
pub const DEFAULT_CAP: u64 = 100_000_000;

/// `n^m`, or `CapExceeded` when it exceeds `cap`.
pub fn checked_allocation_count(n: usize, m: usize, cap: u64) -> Result<u64> {
    let exceeded = || Error::CapExceeded {
        requested: format!("{n}^{m} allocations"),
        cap,
    };
    let m32 = u32::try_from(m).map_err(|_| exceeded())?;
    match (n as u64).checked_pow(m32) {
        Some(total) if total <= cap => Ok(total),
        _ => Err(exceeded()),
    }
}

/// The allocation with the given index.
pub fn allocation_at(n: usize, m: usize, index: u64) -> Allocation {
    let mut bundles = vec![Bundle::EMPTY; n];
    let mut rest = index;
    for g in 0..m {
        bundles[(rest % n as u64) as usize].insert(g);
        rest /= n as u64;
    }
    Allocation::new(bundles)
}

/// In-place base-`n` counter over good owners that keeps bundles current.
pub(crate) struct Odometer {
    n: usize,
    owner: Vec<usize>,
    bundles: Vec<Bundle>,
    index: u64,
    end: u64,
}

impl Odometer {
    /// Positioned at `start`; runs through the last allocation.
    pub(crate) fn new(n: usize, m: usize, start: u64) -> Self {
        let end = (n as u64).checked_pow(m as u32).unwrap_or(u64::MAX);
        Odometer::range(n, m, start, end)
    }

    /// Positioned at `start`; [`Odometer::advance`] stops before `end`.
    pub(crate) fn range(n: usize, m: usize, start: u64, end: u64) -> Self {
        let mut owner = vec![0; m];
        let mut rest = start;
        for o in owner.iter_mut() {
            *o = (rest % n as u64) as usize;
            rest /= n as u64;
        }
        let mut bundles = vec![Bundle::EMPTY; n];
        for (g, &o) in owner.iter().enumerate() {
            bundles[o].insert(g);
        }
        Odometer {
            n,
            owner,
            bundles,
            index: start,
            end,
        }
    }

    pub(crate) fn bundles(&self) -> &[Bundle] {
        &self.bundles
    }

    /// Steps to the next index; false once `end` is reached.
    pub(crate) fn advance(&mut self) -> bool {
        self.index += 1;
        if self.index >= self.end {
            return false;
        }
        for g in 0..self.owner.len() {
            let o = self.owner[g];
            self.bundles[o].remove(g);
            let next = if o + 1 == self.n { 0 } else { o + 1 };
            self.owner[g] = next;
            self.bundles[next].insert(g);
            if next != 0 {
                break;
            }
        }
        true
    }
}

/// Iterator over complete allocations in index order.
pub struct Allocations {
    odo: Odometer,
    started: bool,
    exhausted: bool,
}

impl Allocations {
    /// Allocations with indices in `[start, end)`.
    pub fn range(n: usize, m: usize, start: u64, end: u64) -> Self {
        Allocations {
            odo: Odometer::range(n, m, start, end),
            started: false,
            exhausted: start >= end,
        }
    }
}

impl Iterator for Allocations {
    type Item = Allocation;

    fn next(&mut self) -> Option<Allocation> {
        if self.exhausted {
            return None;
        }
        if self.started && !self.odo.advance() {
            self.exhausted = true;
            return None;
        }
        self.started = true;
        Some(Allocation::new(self.odo.bundles().to_vec()))
    }
}

/// Every complete allocation of `m` goods to `n` agents, subject to `cap`.
pub fn iter_allocations(n: usize, m: usize, cap: u64) -> Result<Allocations> {
    if n == 0 {
        return Err(Error::Precondition("at least one agent is required".into()));
    }
    let total = checked_allocation_count(n, m, cap)?;
    Ok(Allocations::range(n, m, 0, total))
}

#[derive(Clone, Debug)]
pub struct CountOptions {
    pub threads: usize,
    pub cap: u64,
    /// Satisfying allocations kept as witnesses, in index order.
    pub witness_limit: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            threads: 1,
            cap: DEFAULT_CAP,
            witness_limit: 16,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountResult {
    pub total_checked: u64,
    pub satisfying: u64,
    pub witnesses: Vec<Allocation>,
}

impl CountResult {
    /// Concatenates a result for the following index range.
    pub fn merge(mut self, next: CountResult, witness_limit: usize) -> CountResult {
        self.total_checked += next.total_checked;
        self.satisfying += next.satisfying;
        let room = witness_limit.saturating_sub(self.witnesses.len());
        self.witnesses.extend(next.witnesses.into_iter().take(room));
        self
    }

    pub fn to_json(&self, prop: &Property) -> serde_json::Value {
        json!({
            "property": prop.to_string(),
            "total_checked": self.total_checked,
            "satisfying": self.satisfying,
            "witnesses": self.witnesses.iter().map(crate::io::allocation_to_value).collect::<Vec<_>>(),
        })
    }
}

/// Number of complete allocations satisfying `prop`.
pub fn count_satisfying(inst: &Instance, prop: &Property) -> Result<CountResult> {
    count_satisfying_with(inst, prop, &CountOptions::default())
}

pub fn count_satisfying_with(inst: &Instance, prop: &Property, opts: &CountOptions) -> Result<CountResult> {
    let total = checked_allocation_count(inst.n(), inst.m(), opts.cap)?;
    if *prop == Property::Po && !inst.is_binary_additive() {
        // Pairwise dominance over all allocations.
        checked_allocation_count(inst.n(), 2 * inst.m(), opts.cap)?;
    }
    let threads = opts.threads.max(1).min(total.max(1) as usize);
    if threads == 1 {
        return count_range(inst, prop, 0, total, opts.witness_limit);
    }
    let chunk = total.div_ceil(threads as u64);
    let parts: Vec<Result<CountResult>> = thread::scope(|s| {
        let handles: Vec<_> = (0..threads as u64)
            .map(|t| {
                let (start, end) = ((t * chunk).min(total), ((t + 1) * chunk).min(total));
                s.spawn(move || count_range(inst, prop, start, end, opts.witness_limit))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("counting worker panicked"))
            .collect()
    });
    let mut acc = CountResult::default();
    for part in parts {
        acc = acc.merge(part?, opts.witness_limit);
    }
    Ok(acc)
}

/// Counts satisfying allocations with indices in `[start, end)`.
pub fn count_range(inst: &Instance, prop: &Property, start: u64, end: u64, witness_limit: usize) -> Result<CountResult> {
    require_weights(inst, prop)?;
    if *prop == Property::Po {
        return Ok(count_po_range(inst, start, end, witness_limit));
    }
    if let Some(k) = IntKernel::new(inst, true) {
        if let Some(rule) = Rule::new(&k, prop) {
            return Ok(count_rule_range(&k, &rule, start, end, witness_limit));
        }
    }
    let ev = ExactEval(inst);
    let rule = Rule::new(&ev, prop).expect("rational evaluation represents every alpha");
    Ok(count_rule_range(&ev, &rule, start, end, witness_limit))
}

fn count_rule_range<E: Evaluator>(ev: &E, rule: &Rule<E::Scalar>, start: u64, end: u64, limit: usize) -> CountResult {
    scan(ev.n(), ev.m(), start, end, limit, |b| find_violation(ev, b, rule).is_none())
}

fn scan(n: usize, m: usize, start: u64, end: u64, limit: usize, mut ok: impl FnMut(&[Bundle]) -> bool) -> CountResult {
    let mut result = CountResult::default();
    if start >= end {
        return result;
    }
    let mut odo = Odometer::range(n, m, start, end);
    loop {
        result.total_checked += 1;
        if ok(odo.bundles()) {
            result.satisfying += 1;
            if result.witnesses.len() < limit {
                result.witnesses.push(Allocation::new(odo.bundles().to_vec()));
            }
        }
        if !odo.advance() {
            return result;
        }
    }
}

fn count_po_range(inst: &Instance, start: u64, end: u64, limit: usize) -> CountResult {
    if inst.is_binary_additive() {
        let rows = inst.additive_rows().expect("binary additive");
        // A good valued by someone must go to an agent valuing it.
        let wanted: Vec<Bundle> = (0..inst.n())
            .map(|i| (0..inst.m()).filter(|&g| rows[i][g].is_one()).collect())
            .collect();
        let valued = wanted.iter().fold(Bundle::EMPTY, |a, b| a.union(*b));
        return scan(inst.n(), inst.m(), start, end, limit, |bundles| {
            bundles
                .iter()
                .zip(&wanted)
                .all(|(b, w)| b.intersection(valued).is_subset(*w))
        });
    }
    match IntKernel::new(inst, true) {
        Some(k) => count_po_exhaustive(&k, start, end, limit),
        None => count_po_exhaustive(&ExactEval(inst), start, end, limit),
    }
}

fn count_po_exhaustive<E: Evaluator>(ev: &E, start: u64, end: u64, limit: usize) -> CountResult {
    let (n, m) = (ev.n(), ev.m());
    let mut profiles: Vec<Vec<E::Scalar>> = Vec::new();
    let mut odo = Odometer::new(n, m, 0);
    loop {
        profiles.push((0..n).map(|i| ev.value(i, odo.bundles()[i])).collect());
        if !odo.advance() {
            break;
        }
    }
    scan(n, m, start, end, limit, |bundles| {
        let base: Vec<E::Scalar> = (0..n).map(|i| ev.value(i, bundles[i])).collect();
        !profiles.iter().any(|p| {
            p.iter().zip(&base).all(|(a, b)| a >= b) && p.iter().zip(&base).any(|(a, b)| a > b)
        })
    })
}

/// Directed graph on agents whose edges certify structured EFX allocations
/// at `m = n + 2`. Each edge keeps the first witness found in index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), Allocation>,
}

impl JoinGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), Allocation> {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains_key(&(i, j))
    }

    /// Weakly connected components as `(agents, edge count)`, self-loops included.
    pub fn components(&self) -> Vec<(Vec<usize>, usize)> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for &(i, j) in self.edges.keys() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut comps: BTreeMap<usize, (Vec<usize>, usize)> = BTreeMap::new();
        for x in 0..self.n {
            let r = find(&mut parent, x);
            comps.entry(r).or_default().0.push(x);
        }
        for &(i, _) in self.edges.keys() {
            let r = find(&mut parent, i);
            comps.get_mut(&r).expect("every agent has a component").1 += 1;
        }
        comps.into_values().collect()
    }

    /// Whether every component has at least as many edges as agents.
    pub fn components_have_enough_edges(&self) -> bool {
        self.components().iter().all(|(nodes, e)| *e >= nodes.len())
    }
}

/// The join graph of an instance with exactly `n + 2` goods.
pub fn build_join_graph(inst: &Instance) -> Result<JoinGraph> {
    build_join_graph_with_cap(inst, DEFAULT_CAP)
}

pub fn build_join_graph_with_cap(inst: &Instance, cap: u64) -> Result<JoinGraph> {
    let (n, m) = (inst.n(), inst.m());
    if m != n + 2 {
        return Err(Error::Precondition(format!("the join graph needs m = n + 2, got n = {n}, m = {m}")));
    }
    let total = checked_allocation_count(n, m, cap)?;
    let mut edges = BTreeMap::new();
    for alloc in Allocations::range(n, m, 0, total) {
        if alloc.bundles().iter().any(|b| b.is_empty()) {
            continue;
        }
        let mut found = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !edges.contains_key(&(i, j)) && join_criterion(inst, &alloc, i, j) {
                    found.push((i, j));
                }
            }
        }
        if found.is_empty() || !check(inst, &alloc, &Property::Efx)?.holds {
            continue;
        }
        for e in found {
            edges.insert(e, alloc.clone());
        }
    }
    Ok(JoinGraph { n, edges })
}

/// The structural part of the edge criteria (EFX is checked separately).
fn join_criterion(inst: &Instance, alloc: &Allocation, i: usize, j: usize) -> bool {
    let (ai, aj) = (alloc.bundle(i), alloc.bundle(j));
    if i == j {
        return ai.len() == 3;
    }
    if ai.len() != 2 || aj.len() != 2 {
        return false;
    }
    let best = |b: Bundle| b.iter().map(|g| inst.v(j, Bundle::singleton(g))).max();
    best(aj) >= best(ai)
}

/// Re-verifies an edge witness: every agent holds a good, the allocation is
/// EFX and the edge's criterion holds.
pub fn verify_join_edge(inst: &Instance, i: usize, j: usize, alloc: &Allocation) -> Result<bool> {
    let complete = alloc.is_complete(inst.m()) && alloc.bundles().iter().all(|b| !b.is_empty());
    Ok(complete && join_criterion(inst, alloc, i, j) && check(inst, alloc, &Property::Efx)?.holds)
}

/// Result of [`min_count_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub min_count: u64,
    pub argmin_instance: Instance,
    pub seed: u64,
    pub samples: usize,
}

impl SearchReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "min_count": self.min_count,
            "seed": self.seed,
            "samples": self.samples,
            "instance": instance_to_value(&self.argmin_instance),
        })
    }
}

/// Draws `samples` additive instances with values uniform in `[0, value_range]`
/// and reports the fewest `prop`-satisfying allocations seen (first minimum wins).
pub fn min_count_search(
    n: usize,
    m: usize,
    prop: &Property,
    samples: usize,
    seed: u64,
    value_range: u64,
    opts: &CountOptions,
) -> Result<SearchReport> {
    if samples == 0 {
        return Err(Error::Precondition("min_count_search needs at least one sample".into()));
    }
    checked_allocation_count(n, m, opts.cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count_opts = CountOptions {
        witness_limit: 0,
        ..opts.clone()
    };
    let mut best: Option<(u64, Instance)> = None;
    for _ in 0..samples {
        let inst = random_additive(&mut rng, n, m, value_range);
        let count = count_satisfying_with(&inst, prop, &count_opts)?.satisfying;
        if best.as_ref().is_none_or(|(c, _)| count < *c) {
            best = Some((count, inst));
        }
    }
    let (min_count, argmin_instance) = best.expect("at least one sample");
    Ok(SearchReport {
        min_count,
        argmin_instance,
        seed,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn allocation_counts() {
        assert_eq!(iter_allocations(2, 2, DEFAULT_CAP).unwrap().count(), 4);
        assert_eq!(iter_allocations(3, 5, DEFAULT_CAP).unwrap().count(), 243);
        assert_eq!(iter_allocations(1, 3, DEFAULT_CAP).unwrap().count(), 1);
        assert_eq!(iter_allocations(3, 0, DEFAULT_CAP).unwrap().count(), 1);
        assert!(matches!(iter_allocations(3, 40, DEFAULT_CAP), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn odometer_matches_random_access() {
        for (k, a) in iter_allocations(3, 4, DEFAULT_CAP).unwrap().enumerate() {
            assert_eq!(a, allocation_at(3, 4, k as u64));
        }
        let tail: Vec<_> = Allocations::range(2, 3, 5, 8).collect();
        assert_eq!(tail, (5..8).map(|k| allocation_at(2, 3, k)).collect::<Vec<_>>());
    }

    #[test]
    fn remark1_n2_count() {
        let inst = Instance::additive(&[vec![1, 0, 0, 0], vec![1, 0, 0, 0]]).unwrap();
        let r = count_satisfying(&inst, &Property::Efx).unwrap();
        assert_eq!((r.total_checked, r.satisfying), (16, 2));
        for w in &r.witnesses {
            assert!(check(&inst, w, &Property::Efx).unwrap().holds);
        }
    }

    #[test]
    fn threaded_count_matches_serial() {
        let inst = Instance::additive(&[vec![3, 1, 4, 1, 5], vec![9, 2, 6, 5, 3], vec![5, 8, 9, 7, 9]]).unwrap();
        let serial = count_satisfying(&inst, &Property::Ef1).unwrap();
        let opts = CountOptions {
            threads: 4,
            ..CountOptions::default()
        };
        assert_eq!(count_satisfying_with(&inst, &Property::Ef1, &opts).unwrap(), serial);
    }

    #[test]
    fn po_count_general_matches_checker() {
        let inst = Instance::additive(&[vec![2, 1, 1], vec![1, 2, 0]]).unwrap();
        let counted = count_satisfying(&inst, &Property::Po).unwrap().satisfying;
        let direct = iter_allocations(2, 3, DEFAULT_CAP)
            .unwrap()
            .filter(|a| check(&inst, a, &Property::Po).unwrap().holds)
            .count() as u64;
        assert_eq!(counted, direct);
    }

    #[test]
    fn join_graph_rejects_wrong_m() {
        let inst = Instance::additive(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(matches!(build_join_graph(&inst), Err(Error::Precondition(_))));
    }

    #[test]
    fn join_graph_self_loop_when_only_one_good_matters() {
        let inst = Instance::additive(&[vec![1, 0, 0, 0], vec![1, 0, 0, 0]]).unwrap();
        let g = build_join_graph(&inst).unwrap();
        assert!(g.has_edge(0, 0) || g.has_edge(1, 1));
        for (&(i, j), a) in g.edges() {
            assert!(verify_join_edge(&inst, i, j, a).unwrap());
        }
        assert!(g.components_have_enough_edges());
    }

    #[test]
    fn search_is_deterministic() {
        let opts = CountOptions::default();
        let a = min_count_search(2, 4, &Property::Efx, 20, 7, 1000, &opts).unwrap();
        let b = min_count_search(2, 4, &Property::Efx, 20, 7, 1000, &opts).unwrap();
        assert_eq!(a, b);
        assert!(a.min_count >= 2);
    }
}
