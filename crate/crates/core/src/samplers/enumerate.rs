//! Exact enumeration of the random-DFS outcome distribution.
//!
//! Drawing an independent uniform neighbor permutation per node and then
//! running DFS is the same, in law, as choosing uniformly among the
//! unvisited neighbors of the stack top at every expansion step. The
//! enumerator walks that choice tree, so its size is the number of distinct
//! visit orders rather than `n * prod(deg!)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::dfs::SearchRecord;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default cap on the number of enumerated outcomes.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DfsOutcome {
    pub record: SearchRecord,
    pub probability: BigRational,
}

struct Enumerator<'g> {
    g: &'g Graph,
    budget: u64,
    visited: Vec<bool>,
    stack: Vec<usize>,
    visit_order: Vec<usize>,
    tree_edges: Vec<(usize, usize)>,
    out: Vec<DfsOutcome>,
}

impl Enumerator<'_> {
    fn run(&mut self, denom: BigInt) -> Result<()> {
        // Unwind finished nodes until some stack node has unvisited neighbors.
        let mut popped = Vec::new();
        let frontier = loop {
            let Some(&top) = self.stack.last() else {
                break None;
            };
            let open: Vec<usize> = self
                .g
                .neighbors(top)
                .iter()
                .copied()
                .filter(|&v| !self.visited[v])
                .collect();
            if open.is_empty() {
                popped.push(self.stack.pop().unwrap());
            } else {
                break Some((top, open));
            }
        };
        let result = match frontier {
            None => {
                if self.out.len() as u64 >= self.budget {
                    return Err(Error::BudgetExceeded {
                        what: "DFS outcome count",
                        budget: self.budget,
                    });
                }
                self.out.push(DfsOutcome {
                    record: SearchRecord {
                        visit_order: self.visit_order.clone(),
                        tree_edges: self.tree_edges.clone(),
                        root: self.visit_order[0],
                    },
                    probability: BigRational::new(BigInt::one(), denom),
                });
                Ok(())
            }
            Some((top, open)) => {
                let denom = denom * BigInt::from(open.len());
                for v in open {
                    self.visited[v] = true;
                    self.visit_order.push(v);
                    self.tree_edges.push((top, v));
                    self.stack.push(v);
                    let r = self.run(denom.clone());
                    self.stack.pop();
                    self.tree_edges.pop();
                    self.visit_order.pop();
                    self.visited[v] = false;
                    r?;
                }
                Ok(())
            }
        };
        self.stack.extend(popped.into_iter().rev());
        result
    }
}

/// All random-DFS outcomes of a connected graph with exact probabilities,
/// sorted by visit order. Fails once more than `budget` outcomes exist.
pub fn enumerate_dfs(g: &Graph, budget: u64) -> Result<Vec<DfsOutcome>> {
    g.ensure_connected()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::InvalidArgument("enumeration needs n >= 1".into()));
    }
    let mut e = Enumerator {
        g,
        budget,
        visited: vec![false; n],
        stack: Vec::with_capacity(n),
        visit_order: Vec::with_capacity(n),
        tree_edges: Vec::with_capacity(n),
        out: Vec::new(),
    };
    for root in 0..n {
        e.visited[root] = true;
        e.visit_order.push(root);
        e.stack.push(root);
        e.run(BigInt::from(n))?;
        e.stack.clear();
        e.visit_order.clear();
        e.visited[root] = false;
    }
    let mut out = e.out;
    out.sort_by(|a, b| a.record.visit_order.cmp(&b.record.visit_order));
    // Distinct choice paths always give distinct visit orders; merge anyway.
    let mut merged: Vec<DfsOutcome> = Vec::with_capacity(out.len());
    for o in out {
        match merged.last_mut() {
            Some(last) if last.record.visit_order == o.record.visit_order => {
                last.probability += o.probability;
            }
            _ => merged.push(o),
        }
    }
    Ok(merged)
}
