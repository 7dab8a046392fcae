//! Seeded graph families.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::seeded;

/// Connectivity retries for `er_connected` before giving up.
pub const ER_MAX_RETRIES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Path { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    /// One hub (node 0) and `n - 1` leaves.
    Star { n: usize },
    /// Uniform labeled tree via a random Prüfer sequence.
    RandomTree { n: usize },
    /// G(n, p) with `p = avg_deg / (n - 1)`, resampled until connected.
    ErConnected { n: usize, avg_deg: f64 },
    /// `k` six-cycles joined in a chain by single bridge edges, each cycle
    /// carrying one pendant node. `7k` nodes, `8k - 1` edges, max degree 3.
    HexChain { k: usize },
    /// Random connected graph with `|E| = floor(c * n)` and all degrees at
    /// most `d_max`: a degree-capped random tree plus random extra edges.
    Sparse { n: usize, c: f64, d_max: usize },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Path { .. } => "path",
            Family::Cycle { .. } => "cycle",
            Family::Complete { .. } => "complete",
            Family::Star { .. } => "star",
            Family::RandomTree { .. } => "random_tree",
            Family::ErConnected { .. } => "er_connected",
            Family::HexChain { .. } => "hex_chain",
            Family::Sparse { .. } => "sparse",
        }
    }
}

/// Builds a member of `family`. Deterministic for a given `seed`; the
/// non-random families ignore it.
pub fn gen_family(family: &Family, seed: u64) -> Result<Graph> {
    let invalid = |msg: String| Err(Error::InvalidFamily(msg));
    match *family {
        Family::Path { n } => {
            if n == 0 {
                return invalid("path needs n >= 1".into());
            }
            Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
        }
        Family::Cycle { n } => {
            if n < 3 {
                return invalid(format!("cycle needs n >= 3, got {n}"));
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        Family::Complete { n } => {
            if n == 0 {
                return invalid("complete needs n >= 1".into());
            }
            Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        }
        Family::Star { n } => {
            if n < 2 {
                return invalid(format!("star needs n >= 2, got {n}"));
            }
            Graph::from_edges(n, (1..n).map(|v| (0, v)))
        }
        Family::RandomTree { n } => {
            if n == 0 {
                return invalid("random_tree needs n >= 1".into());
            }
            Ok(random_tree(n, &mut seeded(seed)))
        }
        Family::ErConnected { n, avg_deg } => {
            if n < 2 {
                return invalid(format!("er_connected needs n >= 2, got {n}"));
            }
            if !(avg_deg > 0.0 && avg_deg <= (n - 1) as f64) {
                return invalid(format!("avg_deg must lie in (0, n-1], got {avg_deg}"));
            }
            er_connected(n, avg_deg / (n - 1) as f64, seed)
        }
        Family::HexChain { k } => {
            if k == 0 {
                return invalid("hex_chain needs k >= 1".into());
            }
            Ok(hex_chain(k))
        }
        Family::Sparse { n, c, d_max } => {
            if n < 2 || d_max < 2 {
                return invalid(format!("sparse needs n >= 2 and d_max >= 2, got n={n} d_max={d_max}"));
            }
            let target = (c * n as f64).floor() as usize;
            if target < n - 1 || target > n * d_max / 2 {
                return invalid(format!(
                    "edge target {target} outside [n-1, n*d_max/2] for n={n} d_max={d_max}"
                ));
            }
            sparse_bounded(n, target, d_max, seed)
        }
    }
}

fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    if n <= 2 {
        return Graph::from_edges(n, (1..n).map(|i| (0, i))).unwrap();
    }
    let prufer: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &prufer {
        degree[x] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in &prufer {
        let leaf = leaves.pop_first().expect("Prüfer decoding always has a leaf");
        edges.push((leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.insert(x);
        }
    }
    let a = leaves.pop_first().unwrap();
    let b = leaves.pop_first().unwrap();
    edges.push((a, b));
    Graph::from_edges(n, edges).unwrap()
}

fn er_connected(n: usize, p: f64, seed: u64) -> Result<Graph> {
    let mut rng = seeded(seed);
    for _ in 0..ER_MAX_RETRIES {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::RetriesExhausted {
        retries: ER_MAX_RETRIES,
    })
}

fn hex_chain(k: usize) -> Graph {
    let mut edges = Vec::with_capacity(8 * k);
    for c in 0..k {
        let base = 7 * c;
        for i in 0..6 {
            edges.push((base + i, base + (i + 1) % 6));
        }
        // Pendant on ring position 0, bridges leave from 3 and enter at 5.
        edges.push((base, base + 6));
        if c + 1 < k {
            edges.push((base + 3, base + 7 + 5));
        }
    }
    Graph::from_edges(7 * k, edges).unwrap()
}

fn sparse_bounded(n: usize, target: usize, d_max: usize, seed: u64) -> Result<Graph> {
    let mut rng = seeded(seed);
    for _ in 0..ER_MAX_RETRIES {
        let mut degree = vec![0usize; n];
        let mut edges = std::collections::BTreeSet::new();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        for i in 1..n {
            let open: Vec<usize> = order[..i].iter().copied().filter(|&u| degree[u] < d_max).collect();
            let &parent = open.choose(&mut rng).expect("a tree with d_max >= 2 always has an open slot");
            let child = order[i];
            degree[parent] += 1;
            degree[child] += 1;
            edges.insert(crate::graph::edge(parent, child));
        }
        let mut attempts = 0;
        while edges.len() < target && attempts < 100 * n {
            attempts += 1;
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v || degree[u] >= d_max || degree[v] >= d_max {
                continue;
            }
            if edges.insert(crate::graph::edge(u, v)) {
                degree[u] += 1;
                degree[v] += 1;
            }
        }
        if edges.len() == target {
            return Graph::from_edges(n, edges);
        }
    }
    Err(Error::RetriesExhausted {
        retries: ER_MAX_RETRIES,
    })
}
