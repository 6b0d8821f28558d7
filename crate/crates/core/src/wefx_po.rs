//! Polynomial-time WEFX and PO allocations for binary additive valuations.
//!
//! The pipeline:
//! 1. [`strip_zero_goods`] drops goods nobody values;
//! 2. [`sideline_unmatched_agents`] sets aside agents a maximum matching of
//!    agents to valued goods leaves unmatched; they end with empty bundles;
//! 3. a threshold `k` climbs the [`ValueGrid`], and at each level
//!    [`find_minimal`] names the agents whose weighted utility cannot exceed `k`
//!    given the thresholds already fixed; their threshold `M_i` becomes `k`;
//! 4. a matching with `M_i * w_i` replicas per agent yields the bundles;
//! 5. zero goods go to the agent of least `v_i(A_i) / w_i`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
pub use crate::matching::{max_bipartite_matching, BipartiteGraph};
use crate::model::{Allocation, Bundle, Instance};
use crate::rational::Rational;

/// `{ j / w_i : i, 1 <= j <= m + 1 }` plus a sentinel `ε` below every element
/// with `ceil(ε w_i) = 1`, sorted ascending and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueGrid {
    elements: Vec<Rational>,
}

impl ValueGrid {
    pub fn new(weights: &[Rational], m: usize) -> Self {
        let mut elements: Vec<Rational> = weights
            .iter()
            .flat_map(|w| (1..=m as i64 + 1).map(move |j| Rational::from(j) / w))
            .collect();
        elements.sort();
        elements.dedup();
        let smallest = elements.first().cloned();
        let max_weight = weights.iter().max().cloned().unwrap_or_else(Rational::one);
        let bound = match smallest {
            Some(s) => s.min(max_weight.recip()),
            None => max_weight.recip(),
        };
        elements.insert(0, bound / Rational::from(2));
        ValueGrid { elements }
    }

    pub fn epsilon(&self) -> &Rational {
        &self.elements[0]
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    /// Smallest element strictly greater than `x`.
    pub fn succ(&self, x: &Rational) -> Option<&Rational> {
        let at = self.elements.partition_point(|e| e <= x);
        self.elements.get(at)
    }
}

/// Finalized per-agent utility thresholds `M_i`.
pub type ThresholdMap = BTreeMap<usize, Rational>;

/// Operation counters of one pipeline run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WefxPoStats {
    pub grid_levels: usize,
    pub find_minimal_calls: usize,
    pub matchings: usize,
    pub max_graph_nodes: usize,
    /// Goods left unmatched by the final matching and assigned afterwards.
    pub repairs: usize,
}

impl WefxPoStats {
    fn record(&mut self, g: &BipartiteGraph) {
        self.matchings += 1;
        self.max_graph_nodes = self.max_graph_nodes.max(g.left() + g.right());
    }
}

fn require_binary_additive<'a>(inst: &'a Instance, operation: &'static str) -> Result<Vec<&'a [Rational]>> {
    if !inst.is_binary_additive() {
        return Err(Error::unsupported(operation, "binary additive valuations"));
    }
    Ok(inst.additive_rows().expect("binary additive"))
}

/// Instance without the goods every agent values at zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrippedInstance {
    pub reduced: Instance,
    pub zero_goods: Bundle,
    /// `kept[g']` is the original index of reduced good `g'`.
    pub kept: Vec<usize>,
}

pub fn strip_zero_goods(inst: &Instance) -> Result<StrippedInstance> {
    let rows = require_binary_additive(inst, "zero-good stripping")?;
    let (kept, zero): (Vec<usize>, Vec<usize>) =
        (0..inst.m()).partition(|&g| rows.iter().any(|r| r[g].is_one()));
    let agents: Vec<usize> = (0..inst.n()).collect();
    Ok(StrippedInstance {
        reduced: inst.restrict(&agents, &kept)?,
        zero_goods: zero.into_iter().collect(),
        kept,
    })
}

/// Agents covered by a maximum matching of agents to goods they value, and the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sidelined {
    pub active: Vec<usize>,
    pub sidelined: Vec<usize>,
}

pub fn sideline_unmatched_agents(inst: &Instance) -> Result<Sidelined> {
    sideline_with_stats(inst, &mut WefxPoStats::default())
}

fn sideline_with_stats(inst: &Instance, stats: &mut WefxPoStats) -> Result<Sidelined> {
    let rows = require_binary_additive(inst, "agent sidelining")?;
    if let Some(g) = (0..inst.m()).find(|&g| rows.iter().all(|r| r[g].is_zero())) {
        return Err(Error::Precondition(format!("good {g} is valued by no agent")));
    }
    let mut graph = BipartiteGraph::new(inst.n(), inst.m());
    for (i, row) in rows.iter().enumerate() {
        for g in (0..inst.m()).filter(|&g| row[g].is_one()) {
            graph.add_edge(i, g);
        }
    }
    let matching = max_bipartite_matching(&graph);
    stats.record(&graph);
    let (active, sidelined) = (0..inst.n()).partition(|&i| matching.left_to_right[i].is_some());
    Ok(Sidelined { active, sidelined })
}

fn ceil_usize(x: &Rational) -> Result<usize> {
    x.ceil()
        .to_usize()
        .ok_or_else(|| Error::Invariant(format!("replica count {x} out of range")))
}

/// Agents whose threshold must be fixed at level `k`.
///
/// Every agent gets `tau_i` replica nodes: `M_i w_i` when finalized, otherwise
/// `ceil(succ(k) w_i)`. Agents not yet finalized with `ceil(k w_i) < tau_i` may
/// match their last replica to one of `s` slack nodes instead of a good. The
/// smallest `s` admitting a matching that covers every replica is found by a
/// linear scan; the agents using slack are returned.
pub fn find_minimal(inst: &Instance, thresholds: &ThresholdMap, grid: &ValueGrid, k: &Rational) -> Result<BTreeSet<usize>> {
    let rows = require_binary_additive(inst, "the threshold search")?;
    if !inst.is_weighted() {
        return Err(Error::MissingWeights("the threshold search".into()));
    }
    find_minimal_inner(inst, &rows, thresholds, grid, k, &mut WefxPoStats::default())
}

fn find_minimal_inner(
    inst: &Instance,
    rows: &[&[Rational]],
    thresholds: &ThresholdMap,
    grid: &ValueGrid,
    k: &Rational,
    stats: &mut WefxPoStats,
) -> Result<BTreeSet<usize>> {
    stats.find_minimal_calls += 1;
    let (n, m) = (inst.n(), inst.m());
    let next = grid.succ(k);
    let mut tau = Vec::with_capacity(n);
    let mut eligible = vec![false; n];
    for i in 0..n {
        let w = inst.weight(i);
        match thresholds.get(&i) {
            Some(mi) => tau.push(ceil_usize(&(mi * &w))?),
            None => {
                let next = next.ok_or_else(|| {
                    Error::Invariant(format!("agent {i} is unfinalized at the top of the grid"))
                })?;
                let t = ceil_usize(&(next * &w))?;
                eligible[i] = ceil_usize(&(k * &w))? < t;
                tau.push(t);
            }
        }
    }
    for slack in 0..=n {
        let mut graph = BipartiteGraph::new(0, m + slack);
        let mut last_replica = vec![None; n];
        for i in 0..n {
            for r in 0..tau[i] {
                let node = graph.add_left();
                for g in (0..m).filter(|&g| rows[i][g].is_one()) {
                    graph.add_edge(node, g);
                }
                if r + 1 == tau[i] && eligible[i] {
                    for s in 0..slack {
                        graph.add_edge(node, m + s);
                    }
                    last_replica[i] = Some(node);
                }
            }
        }
        let matching = max_bipartite_matching(&graph);
        stats.record(&graph);
        if matching.saturates_left() {
            return Ok((0..n)
                .filter(|&i| last_replica[i].is_some_and(|node| matching.left_to_right[node].is_some_and(|r| r >= m)))
                .collect());
        }
    }
    Err(Error::Invariant(format!("no replica-saturating matching at level {k}")))
}

/// Full result of [`wefx_po_binary_run`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WefxPoRun {
    pub allocation: Allocation,
    /// Thresholds of the active agents, keyed by original agent index.
    pub thresholds: ThresholdMap,
    pub active: Vec<usize>,
    pub zero_goods: Bundle,
    pub stats: WefxPoStats,
}

/// WEFX and PO allocation for binary additive valuations with weights.
pub fn wefx_po_binary(inst: &Instance) -> Result<Allocation> {
    Ok(wefx_po_binary_run(inst)?.allocation)
}

pub fn wefx_po_binary_run(inst: &Instance) -> Result<WefxPoRun> {
    require_binary_additive(inst, "the WEFX+PO algorithm")?;
    if !inst.is_weighted() {
        return Err(Error::MissingWeights("the WEFX+PO algorithm".into()));
    }
    let mut stats = WefxPoStats::default();
    let stripped = strip_zero_goods(inst)?;
    let reduced = &stripped.reduced;
    let Sidelined { active, .. } = sideline_with_stats(reduced, &mut stats)?;
    let mut bundles = vec![Bundle::EMPTY; inst.n()];
    let mut thresholds = ThresholdMap::new();

    if !active.is_empty() {
        let goods: Vec<usize> = (0..reduced.m()).collect();
        let sub = reduced.restrict(&active, &goods)?;
        let rows = sub.additive_rows().expect("binary additive");
        let grid = ValueGrid::new(sub.weights().expect("weighted"), sub.m());
        stats.grid_levels = grid.elements().len();

        let mut local = ThresholdMap::new();
        let mut k = grid.epsilon().clone();
        while local.len() < sub.n() {
            for i in find_minimal_inner(&sub, &rows, &local, &grid, &k, &mut stats)? {
                local.insert(i, k.clone());
            }
            if local.len() < sub.n() {
                k = grid
                    .succ(&k)
                    .cloned()
                    .ok_or_else(|| Error::Invariant("threshold grid exhausted".into()))?;
            }
        }

        let sub_bundles = extract_allocation(&sub, &rows, &local, &mut stats)?;
        for (a, &i) in active.iter().enumerate() {
            bundles[i] = sub_bundles[a].iter().map(|g| stripped.kept[g]).collect();
            thresholds.insert(i, local[&a].clone());
        }
    }

    let utility = |i: usize, b: Bundle| inst.v(i, b) / inst.weight(i);
    let poorest = (0..inst.n())
        .min_by(|&a, &b| utility(a, bundles[a]).cmp(&utility(b, bundles[b])).then(a.cmp(&b)))
        .expect("at least one agent");
    bundles[poorest] = bundles[poorest].union(stripped.zero_goods);

    Ok(WefxPoRun {
        allocation: Allocation::new(bundles),
        thresholds,
        active,
        zero_goods: stripped.zero_goods,
        stats,
    })
}

/// Matches `M_i w_i` replicas per agent to valued goods, then hands any good
/// left over to the valuing agent of least weighted utility.
fn extract_allocation(
    sub: &Instance,
    rows: &[&[Rational]],
    thresholds: &ThresholdMap,
    stats: &mut WefxPoStats,
) -> Result<Vec<Bundle>> {
    let (n, m) = (sub.n(), sub.m());
    let mut graph = BipartiteGraph::new(0, m);
    let mut owner_of_node = Vec::new();
    for i in 0..n {
        let target = thresholds[&i].clone() * sub.weight(i);
        if !target.is_integer() {
            return Err(Error::Invariant(format!("threshold of agent {i} times its weight is {target}")));
        }
        for _ in 0..ceil_usize(&target)? {
            let node = graph.add_left();
            owner_of_node.push(i);
            for g in (0..m).filter(|&g| rows[i][g].is_one()) {
                graph.add_edge(node, g);
            }
        }
    }
    let matching = max_bipartite_matching(&graph);
    stats.record(&graph);
    if !matching.saturates_left() {
        return Err(Error::Invariant("final thresholds are not simultaneously attainable".into()));
    }
    let mut bundles = vec![Bundle::EMPTY; n];
    for (node, g) in matching.pairs() {
        bundles[owner_of_node[node]].insert(g);
    }
    for g in (0..m).filter(|&g| matching.right_to_left[g].is_none()) {
        stats.repairs += 1;
        let utility = |i: usize| Rational::from(bundles[i].len() as i64) / sub.weight(i);
        let taker = (0..n)
            .filter(|&i| rows[i][g].is_one())
            .min_by(|&a, &b| utility(a).cmp(&utility(b)).then(a.cmp(&b)))
            .ok_or_else(|| Error::Invariant(format!("good {g} is valued by no active agent")))?;
        bundles[taker].insert(g);
    }
    Ok(bundles)
}
