use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{edge, Edge, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchRecord {
    /// Nodes in first-visit order; backtracking steps are not recorded.
    pub visit_order: Vec<usize>,
    /// Discovery edges as `(parent, child)`, in discovery order.
    pub tree_edges: Vec<(usize, usize)>,
    pub root: usize,
}

impl SearchRecord {
    pub fn tree_edge_set(&self) -> BTreeSet<Edge> {
        self.tree_edges.iter().map(|&(p, c)| edge(p, c)).collect()
    }
}

/// Random DFS from a uniformly random root.
pub fn sample_dfs<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<SearchRecord> {
    g.ensure_connected()?;
    if g.node_count() == 0 {
        return Err(crate::error::Error::InvalidArgument("search needs n >= 1".into()));
    }
    let root = rng.random_range(0..g.node_count());
    Ok(dfs_from(g, root, rng))
}

/// Random DFS from `root`: each node shuffles its neighbor list once, when
/// first visited, and explores it in that order. Only reaches `root`'s
/// component.
pub fn dfs_from<R: Rng + ?Sized>(g: &Graph, root: usize, rng: &mut R) -> SearchRecord {
    let n = g.node_count();
    let mut order = g.targets().to_vec();
    let mut visited = vec![false; n];
    let mut visit_order = Vec::with_capacity(n);
    let mut tree_edges = Vec::with_capacity(n.saturating_sub(1));
    // (node, cursor into its shuffled neighbor slice)
    let mut stack: Vec<(usize, usize)> = Vec::with_capacity(n);

    let mut enter = |x: usize, order: &mut [usize], visited: &mut [bool]| {
        visited[x] = true;
        visit_order.push(x);
        let (lo, hi) = (g.offset(x), g.offset(x) + g.degree(x));
        order[lo..hi].shuffle(rng);
        lo
    };

    let lo = enter(root, &mut order, &mut visited);
    stack.push((root, lo));
    while let Some(top) = stack.last_mut() {
        let (u, cursor) = *top;
        let end = g.offset(u) + g.degree(u);
        let mut c = cursor;
        while c < end && visited[order[c]] {
            c += 1;
        }
        if c == end {
            stack.pop();
            continue;
        }
        top.1 = c + 1;
        let v = order[c];
        tree_edges.push((u, v));
        let lo = enter(v, &mut order, &mut visited);
        stack.push((v, lo));
    }
    SearchRecord {
        visit_order,
        tree_edges,
        root,
    }
}

/// Checks that a record is a DFS spanning tree of `g`: a permutation of the
/// nodes rooted at `root`, `n - 1` tree edges from `E` forming a connected
/// acyclic subgraph, and every parent visited before its child.
pub fn validate_search(g: &Graph, rec: &SearchRecord) -> std::result::Result<(), String> {
    let n = g.node_count();
    if rec.visit_order.len() != n {
        return Err(format!("visit order has {} nodes, expected {n}", rec.visit_order.len()));
    }
    let mut position = vec![usize::MAX; n];
    for (i, &v) in rec.visit_order.iter().enumerate() {
        if v >= n || position[v] != usize::MAX {
            return Err(format!("visit order is not a permutation (node {v})"));
        }
        position[v] = i;
    }
    if rec.visit_order.first() != Some(&rec.root) {
        return Err("visit order does not start at the root".into());
    }
    if rec.tree_edges.len() != n.saturating_sub(1) {
        return Err(format!("{} tree edges, expected {}", rec.tree_edges.len(), n - 1));
    }
    let mut has_parent = vec![false; n];
    for &(p, c) in &rec.tree_edges {
        if !g.has_edge(p, c) {
            return Err(format!("tree edge ({p}, {c}) not in graph"));
        }
        if position[p] >= position[c] {
            return Err(format!("parent {p} not visited before child {c}"));
        }
        if std::mem::replace(&mut has_parent[c], true) {
            return Err(format!("node {c} has two parents"));
        }
    }
    if has_parent[rec.root] {
        return Err("root has a parent".into());
    }
    // n - 1 edges, each non-root with exactly one earlier parent: a spanning
    // tree. Double-check with union-find for acyclicity.
    let tree = Graph::from_edges(n, rec.tree_edges.iter().copied()).map_err(|e| e.to_string())?;
    if tree.edge_count() != n.saturating_sub(1) || !tree.is_connected() {
        return Err("tree edges do not form a spanning tree".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_family, Family};
    use crate::rng::seeded;

    #[test]
    fn path_from_end_is_forced() {
        let g = gen_family(&Family::Path { n: 3 }, 0).unwrap();
        let rec = dfs_from(&g, 0, &mut seeded(0));
        assert_eq!(rec.visit_order, vec![0, 1, 2]);
        assert_eq!(rec.tree_edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn star_from_hub() {
        let g = gen_family(&Family::Star { n: 4 }, 0).unwrap();
        let mut rng = seeded(1);
        let mut seen = BTreeSet::new();
        for _ in 0..200 {
            let rec = dfs_from(&g, 0, &mut rng);
            assert_eq!(rec.visit_order[0], 0);
            assert_eq!(rec.tree_edge_set(), g.edge_set());
            seen.insert(rec.visit_order.clone());
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn samples_validate() {
        let mut rng = seeded(2);
        for fam in [
            Family::HexChain { k: 3 },
            Family::Complete { n: 6 },
            Family::ErConnected { n: 30, avg_deg: 5.0 },
            Family::Path { n: 1 },
        ] {
            let g = gen_family(&fam, 3).unwrap();
            for _ in 0..100 {
                let rec = sample_dfs(&g, &mut rng).unwrap();
                validate_search(&g, &rec).unwrap();
            }
        }
    }

    #[test]
    fn validation_catches_errors() {
        let g = gen_family(&Family::Cycle { n: 4 }, 0).unwrap();
        let good = dfs_from(&g, 0, &mut seeded(0));
        validate_search(&g, &good).unwrap();

        let mut bad = good.clone();
        bad.tree_edges.pop();
        assert!(validate_search(&g, &bad).is_err());

        let mut bad = good.clone();
        bad.visit_order.swap(0, 1);
        assert!(validate_search(&g, &bad).is_err());

        let mut bad = good;
        bad.tree_edges[0] = (0, 2);
        assert!(validate_search(&g, &bad).is_err());
    }
}
