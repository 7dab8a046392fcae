//! Exhaustive catalogs of small connected graphs, one per isomorphism class.
//!
//! Classes on `n` nodes come from classes on `n - 1` nodes by attaching a new
//! node to every nonempty neighbor subset (every connected graph has a
//! non-cut vertex), deduplicated by a brute-force canonical code.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest size the catalog will build.
pub const MAX_CATALOG_NODES: usize = 8;

/// Canonical code of a graph with at most [`MAX_CATALOG_NODES`] nodes: the
/// largest upper-triangle adjacency bit string over all relabelings that
/// list nodes by nonincreasing degree.
pub fn canonical_code(g: &Graph) -> u64 {
    let n = g.node_count();
    assert!(n <= MAX_CATALOG_NODES, "canonical_code supports n <= {MAX_CATALOG_NODES}");
    let rows: Vec<u16> = (0..n)
        .map(|u| g.neighbors(u).iter().fold(0u16, |acc, &v| acc | (1 << v)))
        .collect();
    let mut degrees: Vec<usize> = g.degrees();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let mut best = 0u64;
    let mut order = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search(g, &rows, &degrees, &mut order, &mut used, 0, &mut best);
    best
}

// Places nodes position by position, extending the code with the new row's
// bits against earlier positions, and prunes branches whose prefix is
// already below the best complete code.
fn search(
    g: &Graph,
    rows: &[u16],
    degrees: &[usize],
    order: &mut Vec<usize>,
    used: &mut [bool],
    code: u64,
    best: &mut u64,
) {
    let n = rows.len();
    let pos = order.len();
    if pos == n {
        *best = (*best).max(code);
        return;
    }
    let total_bits = n * n.saturating_sub(1) / 2;
    for v in 0..n {
        if used[v] || g.degree(v) != degrees[pos] {
            continue;
        }
        let mut c = code;
        for &u in order.iter() {
            c = (c << 1) | ((rows[v] >> u) & 1) as u64;
        }
        let placed = (pos + 1) * pos / 2;
        let remaining = total_bits - placed;
        // Upper bound: pad with ones.
        let upper = (c << remaining) | ((1u64 << remaining) - 1);
        if upper < *best {
            continue;
        }
        used[v] = true;
        order.push(v);
        search(g, rows, degrees, order, used, c, best);
        order.pop();
        used[v] = false;
    }
}

/// One representative per isomorphism class of connected graphs on exactly
/// `n` nodes, for `1 <= n <= 8`.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > MAX_CATALOG_NODES {
        return Err(Error::InvalidArgument(format!(
            "catalog covers 1..={MAX_CATALOG_NODES} nodes, got {n}"
        )));
    }
    let mut level = vec![Graph::empty(1)];
    for size in 2..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        let old = size - 1;
        for g in &level {
            for mask in 1u32..(1 << old) {
                let new_edges = (0..old).filter(|&u| mask & (1 << u) != 0).map(|u| (u, old));
                let h = Graph::from_edges(size, g.edges().chain(new_edges)).expect("valid extension");
                if seen.insert(canonical_code(&h)) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    Ok(level)
}

/// Connected graphs on `1..=max_n` nodes, smallest first.
pub fn connected_graphs_up_to(max_n: usize) -> Result<Vec<Graph>> {
    let mut all = Vec::new();
    for n in 1..=max_n {
        all.extend(connected_graphs(n)?);
    }
    Ok(all)
}
