//! Maximum-cardinality bipartite matching by augmenting paths.

/// Bipartite graph with adjacency lists from left to right nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BipartiteGraph {
    right: usize,
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize) -> Self {
        BipartiteGraph {
            right,
            adj: vec![Vec::new(); left],
        }
    }

    pub fn left(&self) -> usize {
        self.adj.len()
    }

    pub fn right(&self) -> usize {
        self.right
    }

    /// Adds a left node and returns its index.
    pub fn add_left(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Adds a right node and returns its index.
    pub fn add_right(&mut self) -> usize {
        self.right += 1;
        self.right - 1
    }

    pub fn add_edge(&mut self, l: usize, r: usize) {
        debug_assert!(l < self.adj.len() && r < self.right);
        self.adj[l].push(r);
    }

    pub fn neighbors(&self, l: usize) -> &[usize] {
        &self.adj[l]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }
}

/// A matching as `left -> right` partner slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub left_to_right: Vec<Option<usize>>,
    pub right_to_left: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.left_to_right.iter().flatten().count()
    }

    /// Matched pairs in increasing left order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.left_to_right
            .iter()
            .enumerate()
            .filter_map(|(l, r)| r.map(|r| (l, r)))
            .collect()
    }

    pub fn saturates_left(&self) -> bool {
        self.left_to_right.iter().all(Option::is_some)
    }
}

/// Maximum matching; left nodes are processed in index order and neighbors in
/// insertion order, so the result is deterministic.
pub fn max_bipartite_matching(g: &BipartiteGraph) -> Matching {
    let mut m = Matching {
        left_to_right: vec![None; g.left()],
        right_to_left: vec![None; g.right()],
    };
    let mut seen = vec![0usize; g.right()];
    for (stamp, l) in (0..g.left()).enumerate() {
        augment(g, l, stamp + 1, &mut seen, &mut m);
    }
    m
}

fn augment(g: &BipartiteGraph, l: usize, stamp: usize, seen: &mut [usize], m: &mut Matching) -> bool {
    for &r in g.neighbors(l) {
        if seen[r] == stamp {
            continue;
        }
        seen[r] = stamp;
        let free = match m.right_to_left[r] {
            None => true,
            Some(other) => augment(g, other, stamp, seen, m),
        };
        if free {
            m.left_to_right[l] = Some(r);
            m.right_to_left[r] = Some(l);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_max(g: &BipartiteGraph) -> usize {
        fn go(g: &BipartiteGraph, l: usize, used: &mut Vec<bool>) -> usize {
            if l == g.left() {
                return 0;
            }
            let mut best = go(g, l + 1, used);
            for &r in g.neighbors(l) {
                if !used[r] {
                    used[r] = true;
                    best = best.max(1 + go(g, l + 1, used));
                    used[r] = false;
                }
            }
            best
        }
        go(g, 0, &mut vec![false; g.right()])
    }

    #[test]
    fn small_graphs() {
        let mut k22 = BipartiteGraph::new(2, 2);
        for l in 0..2 {
            for r in 0..2 {
                k22.add_edge(l, r);
            }
        }
        assert_eq!(max_bipartite_matching(&k22).size(), 2);

        let mut star = BipartiteGraph::new(3, 1);
        for l in 0..3 {
            star.add_edge(l, 0);
        }
        assert_eq!(max_bipartite_matching(&star).size(), 1);

        assert_eq!(max_bipartite_matching(&BipartiteGraph::new(3, 3)).size(), 0);
    }

    #[test]
    fn augmenting_path_reroutes() {
        let mut g = BipartiteGraph::new(2, 2);
        g.add_edge(0, 0);
        g.add_edge(0, 1);
        g.add_edge(1, 0);
        let m = max_bipartite_matching(&g);
        assert_eq!(m.pairs(), vec![(0, 1), (1, 0)]);
    }

    proptest::proptest! {
        #[test]
        fn matches_brute_force(left in 0usize..6, right in 0usize..6, bits in proptest::collection::vec(proptest::bool::ANY, 36)) {
            let mut g = BipartiteGraph::new(left, right);
            for l in 0..left {
                for r in 0..right {
                    if bits[l * 6 + r] {
                        g.add_edge(l, r);
                    }
                }
            }
            let m = max_bipartite_matching(&g);
            proptest::prop_assert_eq!(m.size(), brute_force_max(&g));
            for (l, r) in m.pairs() {
                proptest::prop_assert!(g.neighbors(l).contains(&r));
                proptest::prop_assert_eq!(m.right_to_left[r], Some(l));
            }
        }
    }
}
