use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkPolicy {
    Uniform,
    /// Never steps straight back unless the current node is a dead end.
    NonBacktracking,
    /// Steps proportional to [`MinDegreeWeight`].
    LocalRule,
}

impl std::str::FromStr for WalkPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(WalkPolicy::Uniform),
            "non_backtracking" | "nb" => Ok(WalkPolicy::NonBacktracking),
            "local_rule" => Ok(WalkPolicy::LocalRule),
            other => Err(Error::InvalidArgument(format!("unknown walk policy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkRecord {
    pub nodes: Vec<usize>,
    pub policy: WalkPolicy,
    pub start: usize,
}

impl WalkRecord {
    /// Number of steps, one less than the number of nodes.
    pub fn length(&self) -> usize {
        self.nodes.len() - 1
    }
}

/// Unnormalized transition weight for a step `u -> v`.
pub trait TransitionWeight {
    fn weight(&self, g: &Graph, u: usize, v: usize) -> f64;
}

/// `w(u, v) = 1 / min(deg u, deg v)`.
///
/// A stand-in for minimum-degree local rules; any other rule can be plugged
/// in through [`sample_walk_weighted`].
#[derive(Debug, Clone, Copy, Default)]
pub struct MinDegreeWeight;

impl TransitionWeight for MinDegreeWeight {
    fn weight(&self, g: &Graph, u: usize, v: usize) -> f64 {
        1.0 / g.degree(u).min(g.degree(v)) as f64
    }
}

impl<F: Fn(&Graph, usize, usize) -> f64> TransitionWeight for F {
    fn weight(&self, g: &Graph, u: usize, v: usize) -> f64 {
        self(g, u, v)
    }
}

pub(crate) fn check_walkable(g: &Graph, length: usize) -> Result<()> {
    if length == 0 {
        return Err(Error::InvalidArgument("walk length must be >= 1".into()));
    }
    if g.edge_count() == 0 {
        return Err(Error::InvalidArgument("walks need at least one edge".into()));
    }
    Ok(())
}

/// Samples a walk of `length` steps from a uniformly random start.
pub fn sample_walk<R: Rng + ?Sized>(
    g: &Graph,
    policy: WalkPolicy,
    length: usize,
    rng: &mut R,
) -> Result<WalkRecord> {
    g.ensure_connected()?;
    check_walkable(g, length)?;
    let start = rng.random_range(0..g.node_count());
    Ok(walk_from(g, start, policy, length, rng))
}

/// Samples a walk whose steps follow a caller-supplied weight function.
pub fn sample_walk_weighted<R: Rng + ?Sized, W: TransitionWeight>(
    g: &Graph,
    length: usize,
    weight: &W,
    rng: &mut R,
) -> Result<WalkRecord> {
    g.ensure_connected()?;
    check_walkable(g, length)?;
    let start = rng.random_range(0..g.node_count());
    let mut nodes = Vec::with_capacity(length + 1);
    nodes.push(start);
    let mut cur = start;
    for _ in 0..length {
        cur = weighted_step(g, cur, weight, rng);
        nodes.push(cur);
    }
    Ok(WalkRecord {
        nodes,
        policy: WalkPolicy::LocalRule,
        start,
    })
}

/// Walk from a fixed start. The graph must be connected with at least one
/// edge; callers check that once up front.
pub fn walk_from<R: Rng + ?Sized>(
    g: &Graph,
    start: usize,
    policy: WalkPolicy,
    length: usize,
    rng: &mut R,
) -> WalkRecord {
    let mut nodes = Vec::with_capacity(length + 1);
    nodes.push(start);
    let mut walker = Walker::new(g, start, policy);
    for _ in 0..length {
        nodes.push(walker.step(rng));
    }
    WalkRecord {
        nodes,
        policy,
        start,
    }
}

/// Step-by-step walk state, for callers that stop on a condition rather
/// than at a fixed length.
#[derive(Debug, Clone)]
pub struct Walker<'g> {
    g: &'g Graph,
    policy: WalkPolicy,
    prev: Option<usize>,
    cur: usize,
}

impl<'g> Walker<'g> {
    pub fn new(g: &'g Graph, start: usize, policy: WalkPolicy) -> Self {
        Walker {
            g,
            policy,
            prev: None,
            cur: start,
        }
    }

    pub fn current(&self) -> usize {
        self.cur
    }

    /// Moves once and returns the new node.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        let nb = self.g.neighbors(self.cur);
        let next = match (self.policy, self.prev) {
            (WalkPolicy::Uniform, _) | (WalkPolicy::NonBacktracking, None) => {
                *nb.choose(rng).expect("connected graph with an edge")
            }
            (WalkPolicy::NonBacktracking, Some(_)) if nb.len() == 1 => nb[0],
            (WalkPolicy::NonBacktracking, Some(prev)) => {
                // Uniform over nb \ {prev}: draw from the first deg-1 slots
                // and swap prev's slot for the last one.
                let k = rng.random_range(0..nb.len() - 1);
                if nb[k] == prev {
                    nb[nb.len() - 1]
                } else {
                    nb[k]
                }
            }
            (WalkPolicy::LocalRule, _) => weighted_step(self.g, self.cur, &MinDegreeWeight, rng),
        };
        self.prev = Some(self.cur);
        self.cur = next;
        next
    }
}

fn weighted_step<R: Rng + ?Sized, W: TransitionWeight>(g: &Graph, u: usize, weight: &W, rng: &mut R) -> usize {
    let nb = g.neighbors(u);
    let total: f64 = nb.iter().map(|&v| weight.weight(g, u, v)).sum();
    let mut x = rng.random::<f64>() * total;
    for &v in nb {
        x -= weight.weight(g, u, v);
        if x < 0.0 {
            return v;
        }
    }
    *nb.last().expect("connected graph with an edge")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_family, Family};
    use crate::rng::seeded;

    fn assert_is_walk(g: &Graph, w: &WalkRecord, len: usize) {
        assert_eq!(w.nodes.len(), len + 1);
        assert_eq!(w.nodes[0], w.start);
        for p in w.nodes.windows(2) {
            assert!(g.has_edge(p[0], p[1]), "{:?} not adjacent", p);
        }
    }

    #[test]
    fn single_edge_alternates() {
        let g = gen_family(&Family::Path { n: 2 }, 0).unwrap();
        let mut rng = seeded(1);
        for _ in 0..20 {
            let w = sample_walk(&g, WalkPolicy::Uniform, 3, &mut rng).unwrap();
            assert!(w.nodes == [0, 1, 0, 1] || w.nodes == [1, 0, 1, 0]);
        }
    }

    #[test]
    fn non_backtracking_on_triangle_rotates() {
        let g = gen_family(&Family::Cycle { n: 3 }, 0).unwrap();
        let mut rng = seeded(2);
        for _ in 0..50 {
            let w = sample_walk(&g, WalkPolicy::NonBacktracking, 5, &mut rng).unwrap();
            for t in 2..w.nodes.len() {
                assert_ne!(w.nodes[t], w.nodes[t - 2]);
            }
            let dir = (w.nodes[1] + 3 - w.nodes[0]) % 3;
            for p in w.nodes.windows(2) {
                assert_eq!((p[1] + 3 - p[0]) % 3, dir);
            }
        }
    }

    #[test]
    fn non_backtracking_on_cycles_visits_every_node_first() {
        let mut rng = seeded(3);
        for n in 3..12 {
            let g = gen_family(&Family::Cycle { n }, 0).unwrap();
            let w = sample_walk(&g, WalkPolicy::NonBacktracking, 3 * n, &mut rng).unwrap();
            let mut firsts = w.nodes[..n].to_vec();
            firsts.sort_unstable();
            firsts.dedup();
            assert_eq!(firsts.len(), n);
        }
    }

    #[test]
    fn non_backtracking_falls_back_at_leaves() {
        let g = gen_family(&Family::Path { n: 2 }, 0).unwrap();
        let w = sample_walk(&g, WalkPolicy::NonBacktracking, 4, &mut seeded(0)).unwrap();
        assert_is_walk(&g, &w, 4);
    }

    #[test]
    fn uniform_kernel_on_c4() {
        // Every visit to a node is followed by one of its two neighbors with
        // probability 1/2 each.
        let g = gen_family(&Family::Cycle { n: 4 }, 0).unwrap();
        let mut rng = seeded(4);
        let mut counts = [[0usize; 4]; 4];
        for _ in 0..10 {
            let w = sample_walk(&g, WalkPolicy::Uniform, 10_000, &mut rng).unwrap();
            for p in w.nodes.windows(2) {
                counts[p[0]][p[1]] += 1;
            }
        }
        for (u, row) in counts.iter().enumerate() {
            let total: usize = row.iter().sum();
            for &v in g.neighbors(u) {
                let f = row[v] as f64 / total as f64;
                assert!((f - 0.5).abs() < 0.02, "{u}->{v}: {f}");
            }
        }
    }

    #[test]
    fn all_policies_yield_walks() {
        let g = gen_family(&Family::HexChain { k: 3 }, 0).unwrap();
        let mut rng = seeded(5);
        for policy in [WalkPolicy::Uniform, WalkPolicy::NonBacktracking, WalkPolicy::LocalRule] {
            for _ in 0..50 {
                let w = sample_walk(&g, policy, 40, &mut rng).unwrap();
                assert_is_walk(&g, &w, 40);
                assert_eq!(w.policy, policy);
            }
        }
    }

    #[test]
    fn custom_weights_are_respected() {
        // Only ever step to the larger neighbor id.
        let g = gen_family(&Family::Path { n: 3 }, 0).unwrap();
        let up = |g: &Graph, u: usize, v: usize| {
            if v > u || g.degree(u) == 1 { 1.0 } else { 0.0 }
        };
        let mut rng = seeded(6);
        for _ in 0..30 {
            let w = sample_walk_weighted(&g, 2, &up, &mut rng).unwrap();
            assert_is_walk(&g, &w, 2);
            if w.start == 0 {
                assert_eq!(w.nodes, vec![0, 1, 2]);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = gen_family(&Family::Path { n: 3 }, 0).unwrap();
        let mut rng = seeded(0);
        assert!(sample_walk(&g, WalkPolicy::Uniform, 0, &mut rng).is_err());
        let split = g.disjoint_union(&g);
        assert_eq!(sample_walk(&split, WalkPolicy::Uniform, 3, &mut rng), Err(Error::Disconnected));
        assert!(sample_walk(&Graph::empty(1), WalkPolicy::Uniform, 1, &mut rng).is_err());
    }
}
