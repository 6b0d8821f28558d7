//! Constructive allocation algorithms.
//!
//! * [`alg1_n_plus_2`]: greedy picks plus virtual goods, EFX when `m = n + 2`.
//! * [`lemma_two_goods_allocation`]: the same state, steered so one chosen
//!   agent ends with at least two goods.
//! * [`unenvied_path`]: the smallest-envier walk towards the last agent.
//! * [`cut_and_choose_efx`], [`bobw_lottery`], [`leximax_cut_efx_plus`]: two-agent procedures.
//! * [`weighted_leximinpp_optimal`]: brute-force maximum of the weighted leximin++ order.

use std::cmp::Ordering;

use crate::enumeration::{checked_allocation_count, Odometer, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::fairness::{eliminate_cycles_with, envy_graph, envy_graph_with, EnvyGraph};
use crate::kernel::{Evaluator, ExactEval, IntKernel};
use crate::model::{Allocation, Bundle, Instance};
use crate::rational::Rational;

/// The three goods left after the greedy phase, seen as a small good `s`
/// (each agent's least valued pool good) and a large good `l` (the rest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualSplit {
    pub pool: Bundle,
    pub s_value: Vec<Rational>,
    pub l_value: Vec<Rational>,
}

impl VirtualSplit {
    pub fn new(inst: &Instance, pool: Bundle) -> Result<Self> {
        let rows = additive_rows(inst, "virtual goods")?;
        if pool.is_empty() {
            return Err(Error::Precondition("virtual goods need a non-empty pool".into()));
        }
        let mut s_value = Vec::with_capacity(inst.n());
        let mut l_value = Vec::with_capacity(inst.n());
        for row in rows {
            let s = pool.iter().map(|g| row[g].clone()).min().expect("pool is non-empty");
            let total: Rational = pool.iter().map(|g| &row[g]).sum();
            l_value.push(total - &s);
            s_value.push(s);
        }
        Ok(VirtualSplit { pool, s_value, l_value })
    }
}

fn additive_rows<'a>(inst: &'a Instance, operation: &'static str) -> Result<Vec<&'a [Rational]>> {
    inst.additive_rows()
        .ok_or_else(|| Error::unsupported(operation, "additive valuations"))
}

/// What an agent holds between the greedy phase and the final resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Holding {
    Good(usize),
    Large,
}

struct HoldingState<'a> {
    rows: Vec<&'a [Rational]>,
    split: VirtualSplit,
    holdings: Vec<Holding>,
}

impl HoldingState<'_> {
    fn value(&self, agent: usize, h: Holding) -> Rational {
        match h {
            Holding::Good(g) => self.rows[agent][g].clone(),
            Holding::Large => self.split.l_value[agent].clone(),
        }
    }

    fn graph(&self) -> EnvyGraph {
        envy_graph_with(self.rows.len(), |i, h| self.value(i, h), &self.holdings)
    }

    /// Pool goods the agent values most, lowest indices first among ties.
    fn favourites(&self, agent: usize, count: usize) -> Bundle {
        let mut goods = self.split.pool.goods();
        goods.sort_by(|&a, &b| self.rows[agent][b].cmp(&self.rows[agent][a]).then(a.cmp(&b)));
        goods.into_iter().take(count).collect()
    }

    /// Replaces `l` by its owner's two favourite pool goods and gives the
    /// remaining pool good to `small_owner`.
    fn resolve(&self, small_owner: usize) -> Allocation {
        let large_owner = self
            .holdings
            .iter()
            .position(|h| *h == Holding::Large)
            .expect("some agent holds the large virtual good");
        let mut bundles: Vec<Bundle> = self
            .holdings
            .iter()
            .map(|h| match h {
                Holding::Good(g) => Bundle::singleton(*g),
                Holding::Large => Bundle::EMPTY,
            })
            .collect();
        let large = self.favourites(large_owner, 2);
        bundles[large_owner] = bundles[large_owner].union(large);
        let rest = self.split.pool.difference(large);
        bundles[small_owner] = bundles[small_owner].union(rest);
        Allocation::new(bundles)
    }
}

/// Greedy picks in `order` for all but the last agent, who takes `l`.
fn state_one<'a>(inst: &'a Instance, order: &[usize]) -> Result<HoldingState<'a>> {
    let (n, m) = (inst.n(), inst.m());
    if m != n + 2 {
        return Err(Error::Precondition(format!("needs m = n + 2, got n = {n}, m = {m}")));
    }
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
        return Err(Error::Precondition(format!("order must be a permutation of 0..{n}")));
    }
    let rows = additive_rows(inst, "greedy picking with virtual goods")?;
    let mut pool = inst.all_goods();
    let mut holdings = vec![Holding::Large; n];
    for &i in &order[..n - 1] {
        let best = pool
            .iter()
            .max_by(|&a, &b| rows[i][a].cmp(&rows[i][b]).then(b.cmp(&a)))
            .expect("pool keeps three goods");
        holdings[i] = Holding::Good(best);
        pool.remove(best);
    }
    let split = VirtualSplit::new(inst, pool)?;
    Ok(HoldingState { rows, split, holdings })
}

/// EFX allocation for `m = n + 2` additive goods. Agents in `order` pick their
/// favourite remaining good, the last takes the virtual good `l`, envy cycles
/// are eliminated, `s` goes to the lowest-indexed unenvied agent, and the
/// virtual goods are finally replaced by real pool goods.
pub fn alg1_n_plus_2(inst: &Instance, order: &[usize]) -> Result<Allocation> {
    let mut state = state_one(inst, order)?;
    let n = inst.n();
    let mut holdings = std::mem::take(&mut state.holdings);
    eliminate_cycles_with(n, |i, h| state.value(i, h), &mut holdings);
    state.holdings = holdings;
    let small_owner = *state
        .graph()
        .unenvied()
        .first()
        .ok_or_else(|| Error::Invariant("an acyclic envy graph has an unenvied agent".into()))?;
    Ok(state.resolve(small_owner))
}

/// EFX allocation at `m = n + 2` in which `agent` holds three goods, or holds
/// two goods alongside another agent holding two.
pub fn lemma_two_goods_allocation(inst: &Instance, agent: usize) -> Result<Allocation> {
    let n = inst.n();
    if agent >= n {
        return Err(Error::AgentOutOfRange { agent, n });
    }
    let order: Vec<usize> = (0..n).filter(|&i| i != agent).chain([agent]).collect();
    let mut state = state_one(inst, &order)?;
    let graph = state.graph();
    if let Some(&j) = graph.unenvied().first() {
        return Ok(state.resolve(j));
    }
    // Everyone is envied, so someone prefers `l` to their own good.
    let start = (0..n)
        .find(|&i| graph.envies(i, agent))
        .ok_or_else(|| Error::Invariant("no agent envies the holder of l".into()))?;
    let path = walk_to(&graph, start, agent, &order)?;
    // `start` takes `l`; every later agent on the path takes its predecessor's holding.
    let old = state.holdings.clone();
    state.holdings[start] = Holding::Large;
    for w in path.windows(2) {
        state.holdings[w[1]] = old[w[0]];
    }
    Ok(state.resolve(agent))
}

/// Walks from `start` to `target`, each step moving to the smallest-ranked
/// agent (by `rank_order`) that envies the current one.
fn walk_to(graph: &EnvyGraph, start: usize, target: usize, rank_order: &[usize]) -> Result<Vec<usize>> {
    let mut path = vec![start];
    let mut k = start;
    while k != target {
        let next = rank_order
            .iter()
            .copied()
            .find(|&j| j != k && graph.envies(j, k))
            .ok_or_else(|| Error::Precondition(format!("no agent envies agent {k} before reaching {target}")))?;
        if path.contains(&next) {
            return Err(Error::Precondition(format!("walk revisits agent {next}")));
        }
        path.push(next);
        k = next;
    }
    Ok(path)
}

/// Walk from `start` to the last agent `n - 1`, each step moving to the
/// smallest-indexed agent envying the current one.
pub fn unenvied_path_in(graph: &EnvyGraph, start: usize) -> Result<Vec<usize>> {
    let n = graph.n();
    if start >= n {
        return Err(Error::AgentOutOfRange { agent: start, n });
    }
    let order: Vec<usize> = (0..n).collect();
    walk_to(graph, start, n - 1, &order)
}

/// [`unenvied_path_in`] on the envy graph of `alloc`.
pub fn unenvied_path(inst: &Instance, alloc: &Allocation, start: usize) -> Result<Vec<usize>> {
    crate::model::validate_allocation(inst, alloc, false)?;
    unenvied_path_in(&envy_graph(inst, alloc), start)
}

fn require_two_agents(inst: &Instance, operation: &str) -> Result<()> {
    if inst.n() != 2 {
        return Err(Error::Precondition(format!("{operation} needs exactly two agents, got {}", inst.n())));
    }
    Ok(())
}

fn require_agent(inst: &Instance, agent: usize) -> Result<()> {
    if agent >= inst.n() {
        return Err(Error::AgentOutOfRange { agent, n: inst.n() });
    }
    Ok(())
}

fn require_subset_scan(m: usize) -> Result<u64> {
    checked_allocation_count(2, m, DEFAULT_CAP)
}

/// The chooser takes the weakly preferred side; ties go to the side holding
/// the lowest-indexed good.
fn choose(inst: &Instance, cutter: usize, side: Bundle) -> Allocation {
    let chooser = 1 - cutter;
    let other = inst.all_goods().difference(side);
    let (a, b) = (inst.v(chooser, side), inst.v(chooser, other));
    let takes_side = match a.cmp(&b) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => side.mask().trailing_zeros() < other.mask().trailing_zeros(),
    };
    let (mine, theirs) = if takes_side { (other, side) } else { (side, other) };
    let mut bundles = vec![Bundle::EMPTY; 2];
    bundles[cutter] = mine;
    bundles[chooser] = theirs;
    Allocation::new(bundles)
}

/// Two-agent cut and choose: the cutter splits the goods as evenly as possible
/// by its own valuation (first such mask), the chooser picks a side.
///
/// For an additive cutter, goods the cutter values at zero are moved to the
/// cutter's lower side whenever the split is not exact, which keeps the cut
/// EFX even though zero-valued goods count as pivotal.
pub fn cut_and_choose_efx(inst: &Instance, cutter: usize) -> Result<Allocation> {
    require_two_agents(inst, "cut and choose")?;
    require_agent(inst, cutter)?;
    let total_masks = require_subset_scan(inst.m())?;
    let full = inst.all_goods();
    let mut best: Option<(Rational, Bundle)> = None;
    for mask in 0..total_masks {
        let side = Bundle::from_mask(mask);
        let diff = (inst.v(cutter, side) - inst.v(cutter, full.difference(side))).abs();
        if best.as_ref().is_none_or(|(d, _)| diff < *d) {
            best = Some((diff, side));
        }
    }
    let (diff, mut side) = best.expect("at least the empty mask is scanned");
    if let Some(row) = inst.valuation(cutter).additive_values() {
        if !diff.is_zero() {
            let other = full.difference(side);
            let zeros: Bundle = (0..inst.m()).filter(|&g| row[g].is_zero()).collect();
            side = if inst.v(cutter, side) < inst.v(cutter, other) {
                side.union(zeros)
            } else {
                side.difference(zeros)
            };
        }
    }
    Ok(choose(inst, cutter, side))
}

/// Two-agent cut and choose for EFX+: among all splits, label the higher side
/// (by the cutter; the smaller one on value ties) `A_2`, take the split
/// minimizing `(v(A_2), |A_2|)`, first in mask order, and let the chooser pick.
pub fn leximax_cut_efx_plus(inst: &Instance, cutter: usize) -> Result<Allocation> {
    require_two_agents(inst, "leximax cut and choose")?;
    require_agent(inst, cutter)?;
    let total_masks = require_subset_scan(inst.m())?;
    let full = inst.all_goods();
    let mut best: Option<((Rational, usize), Bundle)> = None;
    for mask in 0..total_masks {
        let side = Bundle::from_mask(mask);
        let other = full.difference(side);
        let (a, b) = (inst.v(cutter, side), inst.v(cutter, other));
        let key = match a.cmp(&b) {
            Ordering::Greater => (a, side.len()),
            Ordering::Less => (b, other.len()),
            Ordering::Equal => (a, side.len().min(other.len())),
        };
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, side));
        }
    }
    Ok(choose(inst, cutter, best.expect("at least the empty mask is scanned").1))
}

/// One entry of a [`Lottery`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LotteryEntry {
    pub probability: Rational,
    pub allocation: Allocation,
}

/// A distribution over complete allocations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lottery {
    pub entries: Vec<LotteryEntry>,
}

impl Lottery {
    /// `sum_p p * v_agent(A_of)`.
    pub fn expected_value(&self, inst: &Instance, agent: usize, of: usize) -> Rational {
        self.entries
            .iter()
            .map(|e| e.probability.clone() * inst.v(agent, e.allocation.bundle(of)))
            .sum()
    }

    /// No agent prefers another's bundle in expectation.
    pub fn is_ex_ante_ef(&self, inst: &Instance) -> bool {
        (0..inst.n()).all(|i| {
            let own = self.expected_value(inst, i, i);
            (0..inst.n()).all(|j| own >= self.expected_value(inst, i, j))
        })
    }
}

/// Uniform mix of cut and choose with either agent cutting; identical
/// outcomes are merged.
pub fn bobw_lottery(inst: &Instance) -> Result<Lottery> {
    require_two_agents(inst, "the cut-and-choose lottery")?;
    additive_rows(inst, "the cut-and-choose lottery")?;
    let mut entries: Vec<LotteryEntry> = Vec::new();
    for cutter in 0..2 {
        let allocation = cut_and_choose_efx(inst, cutter)?;
        match entries.iter_mut().find(|e| e.allocation == allocation) {
            Some(e) => e.probability = e.probability.clone() + Rational::new(1, 2),
            None => entries.push(LotteryEntry {
                probability: Rational::new(1, 2),
                allocation,
            }),
        }
    }
    Ok(Lottery { entries })
}

/// Complete allocation maximal under the weighted leximin++ order: sort agents
/// by `(v_i(A_i) / w_i, |A_i|)`, compare the utility vectors lexicographically,
/// then the bundle-size vectors. The first maximum in index order is returned.
pub fn weighted_leximinpp_optimal(inst: &Instance) -> Result<Allocation> {
    weighted_leximinpp_optimal_with_cap(inst, DEFAULT_CAP)
}

pub fn weighted_leximinpp_optimal_with_cap(inst: &Instance, cap: u64) -> Result<Allocation> {
    if !inst.is_weighted() {
        return Err(Error::MissingWeights("weighted leximin++".into()));
    }
    checked_allocation_count(inst.n(), inst.m(), cap)?;
    Ok(match IntKernel::new(inst, true) {
        Some(k) => leximinpp_search(&k),
        None => leximinpp_search(&ExactEval(inst)),
    })
}

/// Sort key entry: utility as the fraction `value / weight`, then bundle size.
struct Slot<S> {
    value: S,
    weight: S,
    size: usize,
}

fn cmp_utility<S: Clone + Ord + std::ops::Mul<Output = S>>(a: &Slot<S>, b: &Slot<S>) -> Ordering {
    (a.value.clone() * b.weight.clone()).cmp(&(b.value.clone() * a.weight.clone()))
}

fn leximinpp_key<E: Evaluator>(ev: &E, bundles: &[Bundle]) -> Vec<Slot<E::Scalar>> {
    let mut key: Vec<Slot<E::Scalar>> = bundles
        .iter()
        .enumerate()
        .map(|(i, b)| Slot {
            value: ev.value(i, *b),
            weight: ev.weight(i),
            size: b.len(),
        })
        .collect();
    key.sort_by(|a, b| cmp_utility(a, b).then(a.size.cmp(&b.size)));
    key
}

fn cmp_keys<S: Clone + Ord + std::ops::Mul<Output = S>>(a: &[Slot<S>], b: &[Slot<S>]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| cmp_utility(x, y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.iter().map(|s| s.size).cmp(b.iter().map(|s| s.size)))
}

fn leximinpp_search<E: Evaluator>(ev: &E) -> Allocation {
    let mut odo = Odometer::new(ev.n(), ev.m(), 0);
    let mut best_key = leximinpp_key(ev, odo.bundles());
    let mut best = odo.bundles().to_vec();
    while odo.advance() {
        let key = leximinpp_key(ev, odo.bundles());
        if cmp_keys(&key, &best_key) == Ordering::Greater {
            best_key = key;
            best = odo.bundles().to_vec();
        }
    }
    Allocation::new(best)
}
