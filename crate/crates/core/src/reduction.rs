//! Counting perfect matchings of a bipartite graph by counting EFX allocations.
//!
//! Agents are the left nodes and the first `n` goods the right nodes: a good
//! is worth 1 to an adjacent agent and 1/2 otherwise. `k` zero-valued goods
//! follow. A bijection of the first `n` goods with `i` unenvied agents extends
//! to exactly `i^k` EFX allocations and every other partial allocation to none,
//! so the EFX count is `P = sum_i a_i i^k` and `floor(P / n^k) = a_n`, the
//! number of perfect matchings, once `n^k > (n - 1)^k n!`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;

use crate::enumeration::{count_satisfying_with, CountOptions};
use crate::error::{Error, Result};
use crate::fairness::{envy_graph, Property};
use crate::model::{Allocation, Instance};
use crate::rational::Rational;

/// Smallest `k` with `n^k > (n - 1)^k n!`.
pub fn min_exponent_k(n: usize) -> Result<u32> {
    if n < 2 {
        return Err(Error::Precondition(format!("the exponent bound needs n >= 2, got {n}")));
    }
    let factorial: BigUint = (1..=n as u64).product();
    let (base, lower) = (BigUint::from(n), BigUint::from(n - 1));
    let (mut lhs, mut rhs) = (BigUint::one(), factorial);
    let mut k = 0;
    while lhs <= rhs {
        lhs *= &base;
        rhs *= &lower;
        k += 1;
    }
    Ok(k)
}

/// Bipartite graph with `n` nodes per side; `(x, y)` joins left `x` to right `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteInput {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl BipartiteInput {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let edges: BTreeSet<_> = edges.into_iter().collect();
        if let Some(&(x, y)) = edges.iter().find(|&&(x, y)| x >= n || y >= n) {
            return Err(Error::invalid("edges", format!("edge ({x}, {y}) leaves a side of size {n}")));
        }
        Ok(BipartiteInput { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.edges.contains(&(x, y))
    }

    /// Left nodes without neighbours.
    pub fn isolated_left(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&x| !self.edges.iter().any(|&(l, _)| l == x))
            .collect()
    }
}

/// Parses one `i j` edge per line, 0-based, blank lines ignored. Without
/// `n`, the side size is one more than the largest index.
pub fn parse_graph(text: &str, n: Option<usize>) -> Result<BipartiteInput> {
    let mut edges = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parsed: Option<Vec<usize>> = fields.iter().map(|f| f.parse().ok()).collect();
        match parsed.as_deref() {
            Some(&[x, y]) => edges.push((x, y)),
            _ => {
                return Err(Error::invalid(
                    format!("line {}", line_no + 1),
                    format!("expected two node indices, got {line:?}"),
                ))
            }
        }
    }
    let inferred = edges.iter().map(|&(x, y)| x.max(y) + 1).max().unwrap_or(0);
    BipartiteInput::new(n.unwrap_or(inferred), edges)
}

/// The gadget instance with `n` agents and `n + min_exponent_k(n)` goods.
pub fn graph_to_instance(g: &BipartiteInput) -> Result<Instance> {
    if let Some(x) = g.isolated_left().first() {
        return Err(Error::Precondition(format!("left node {x} has no neighbour")));
    }
    let n = g.n();
    let k = min_exponent_k(n)? as usize;
    let rows = (0..n)
        .map(|x| {
            (0..n + k)
                .map(|j| match j {
                    j if j >= n => Rational::zero(),
                    j if g.has_edge(x, j) => Rational::one(),
                    _ => Rational::new(1, 2),
                })
                .collect()
        })
        .collect();
    Instance::additive_rational(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub n: usize,
    pub k: u32,
    /// EFX allocations of the gadget instance; absent when short-circuited.
    pub efx_count: Option<u64>,
    pub matchings: u64,
}

impl ReductionReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "k": self.k,
            "efx_count": self.efx_count,
            "matchings": self.matchings,
        })
    }
}

pub fn recover_matching_count(g: &BipartiteInput) -> Result<u64> {
    Ok(reduce_with(g, &CountOptions::default())?.matchings)
}

/// Builds the gadget, counts its EFX allocations and divides by `n^k`.
pub fn reduce_with(g: &BipartiteInput, opts: &CountOptions) -> Result<ReductionReport> {
    let n = g.n();
    let k = min_exponent_k(n)?;
    if !g.isolated_left().is_empty() {
        return Ok(ReductionReport { n, k, efx_count: None, matchings: 0 });
    }
    let inst = graph_to_instance(g)?;
    let opts = CountOptions { witness_limit: 0, ..opts.clone() };
    let p = count_satisfying_with(&inst, &Property::Efx, &opts)?.satisfying;
    let scale = (n as u64).pow(k);
    Ok(ReductionReport { n, k, efx_count: Some(p), matchings: p / scale })
}

/// `a_i`: bijections of the first `n` goods to agents with exactly `i`
/// unenvied agents, for `i = 0..=n`.
pub fn unenvied_profile(g: &BipartiteInput) -> Result<Vec<u64>> {
    let inst = graph_to_instance(g)?;
    let n = g.n();
    let mut counts = vec![0u64; n + 1];
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut alloc = Allocation::empty(n);
        for (good, &agent) in perm.iter().enumerate() {
            alloc.bundles_mut()[agent].insert(good);
        }
        counts[envy_graph(&inst, &alloc).unenvied().len()] += 1;
        if !next_permutation(&mut perm) {
            return Ok(counts);
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("p[i] qualifies");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
