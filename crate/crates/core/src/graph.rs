//! Undirected simple graphs with stable integer node ids.
//!
//! Adjacency is stored in compressed form with every neighbor list sorted, so
//! iteration order is canonical and all randomness has to come from an
//! explicit RNG.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unordered node pair, always stored as `(min, max)`.
pub type Edge = (usize, usize);

/// Normalizes an unordered pair.
#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.node_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Builds a graph on `n` nodes. Duplicate pairs (in either orientation)
    /// are merged; self-loops and out-of-range ids are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop { node: u });
            }
            for x in [u, v] {
                if x >= n {
                    return Err(Error::NodeOutOfRange { node: x, n });
                }
            }
            set.insert(edge(u, v));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_sorted_lists(adj))
    }

    fn from_sorted_lists(mut adj: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for list in &mut adj {
            list.sort_unstable();
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        Graph { offsets, targets }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Offset of `u`'s neighbor list inside the flat target array.
    #[inline]
    pub(crate) fn offset(&self, u: usize) -> usize {
        self.offsets[u]
    }

    /// Index of the edge `{u, v}` in `0..2|E|`, unique per unordered pair.
    #[inline]
    pub(crate) fn slot(&self, u: usize, v: usize) -> Option<usize> {
        let (a, b) = edge(u, v);
        if a >= self.node_count() {
            return None;
        }
        self.neighbors(a).binary_search(&b).ok().map(|i| self.offsets[a] + i)
    }

    #[inline]
    pub(crate) fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges().collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|u| self.degree(u)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count()).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    /// Component id per node, numbered in order of smallest member.
    pub fn components(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &v in self.neighbors(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |c| c + 1)
    }

    /// The empty graph and the single node count as connected.
    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    pub(crate) fn ensure_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    pub(crate) fn check_node(&self, u: usize) -> Result<()> {
        if u < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: u,
                n: self.node_count(),
            })
        }
    }

    /// Maps every edge `(u, v)` to `(perm[u], perm[v])`.
    pub fn relabel(&self, perm: &Permutation) -> Result<Graph> {
        if perm.len() != self.node_count() {
            return Err(Error::NotAPermutation {
                n: self.node_count(),
                reason: format!("length {}", perm.len()),
            });
        }
        Graph::from_edges(
            self.node_count(),
            self.edges().map(|(u, v)| (perm.apply(u), perm.apply(v))),
        )
    }

    /// Places `other` after `self`, offsetting its ids by `self.node_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.node_count();
        let mut adj: Vec<Vec<usize>> = (0..off).map(|u| self.neighbors(u).to_vec()).collect();
        adj.extend((0..other.node_count()).map(|u| other.neighbors(u).iter().map(|&v| v + off).collect()));
        Self::from_sorted_lists(adj)
    }

    /// Subgraph on the same node set with `e` removed.
    pub fn without_edge(&self, e: Edge) -> Graph {
        let e = edge(e.0, e.1);
        Graph::from_edges(self.node_count(), self.edges().filter(|&f| f != e))
            .expect("subgraph of a valid graph")
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let n = self.node_count();
        let m = self.edge_count();
        let (avg_deg, sparsity_c) = if n == 0 {
            (0.0, 0.0)
        } else {
            (2.0 * m as f64 / n as f64, m as f64 / n as f64)
        };
        DegreeStats {
            d_max: self.max_degree(),
            avg_deg,
            sparsity_c,
        }
    }

    /// Canonical edge-list text: `# n=<k>` header then one `u v` line per
    /// edge with `u < v`, sorted.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# n={}\n", self.node_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses line-oriented `u v` text. `#` starts a comment; a `# n=<k>`
    /// header fixes the node count, otherwise it is one more than the
    /// largest id seen.
    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut declared: Option<usize> = None;
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(k) = comment.trim().strip_prefix("n=") {
                    let k = k.trim().parse::<usize>().map_err(|e| Error::Parse {
                        line: line_no,
                        message: format!("bad node count header: {e}"),
                    })?;
                    declared = Some(k);
                }
                continue;
            }
            let mut fields = line.split_whitespace();
            let mut next_id = |what: &str| -> Result<usize> {
                let tok = fields.next().ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: format!("missing {what} endpoint"),
                })?;
                tok.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid node id {tok:?}"),
                })
            };
            let u = next_id("first")?;
            let v = next_id("second")?;
            if let Some(extra) = fields.next() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unexpected trailing token {extra:?}"),
                });
            }
            if u == v {
                return Err(Error::SelfLoop { node: u });
            }
            pairs.push((u, v));
        }
        let seen = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let n = match declared {
            Some(k) => k,
            None => seen,
        };
        Graph::from_edges(n, pairs)
    }
}

/// Degree summary used by the edge-coverage bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub d_max: usize,
    /// `2|E| / |V|`
    pub avg_deg: f64,
    /// `|E| / |V|`, the sparsity constant of the coverage bound.
    pub sparsity_c: f64,
}

/// A bijection on `0..n`, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n {
                return Err(Error::NotAPermutation {
                    n,
                    reason: format!("image {x} out of range"),
                });
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotAPermutation {
                    n,
                    reason: format!("image {x} repeated"),
                });
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Permutation(images)
    }

    #[inline]
    pub fn apply(&self, u: usize) -> usize {
        self.0[u]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn map_seq(&self, seq: &[usize]) -> Vec<usize> {
        seq.iter().map(|&u| self.apply(u)).collect()
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}
