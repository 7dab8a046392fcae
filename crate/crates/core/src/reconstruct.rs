//! Edge recovery from search sequences and their adjacency encodings.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::encodings::{adjacency_encoding, BinaryMatrix};
use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph};
use crate::samplers::{SampleItem, SampleSet};

/// Reads `adj[i, j] = 1` as the edge `(w_i, w_{i-j})` and unions the result
/// over all sequences. Column `c` of an encoding holds offset `j = c + 1`.
pub fn reconstruct_from_searches(
    n: usize,
    seqs: &[Vec<usize>],
    encs: &[BinaryMatrix],
    s: usize,
) -> Result<BTreeSet<Edge>> {
    if seqs.len() != encs.len() {
        return Err(Error::Shape(format!("{} sequences but {} encodings", seqs.len(), encs.len())));
    }
    if s < 2 {
        return Err(Error::InvalidArgument(format!("window must be >= 2, got {s}")));
    }
    let mut edges = BTreeSet::new();
    for (seq, enc) in seqs.iter().zip(encs) {
        if enc.shape != [seq.len(), s - 1] {
            return Err(Error::Shape(format!(
                "encoding shape {:?}, expected [{}, {}]",
                enc.shape,
                seq.len(),
                s - 1
            )));
        }
        if let Some(&v) = seq.iter().find(|&&v| v >= n) {
            return Err(Error::NodeOutOfRange { node: v, n });
        }
        for i in 0..seq.len() {
            for j in 1..s {
                if !enc.get(i, j - 1) {
                    continue;
                }
                if j > i {
                    return Err(Error::Shape(format!("entry ({i}, {j}) reaches before the sequence start")));
                }
                let (a, b) = (seq[i], seq[i - j]);
                if a == b {
                    return Err(Error::SelfLoop { node: a });
                }
                edges.insert(edge(a, b));
            }
        }
    }
    Ok(edges)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub recovered_edges: BTreeSet<Edge>,
    pub missing: BTreeSet<Edge>,
    pub spurious: BTreeSet<Edge>,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconstructionSummary {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub missing_count: usize,
    pub spurious_count: usize,
    pub exact: bool,
}

impl ReconstructionReport {
    pub fn summary(&self) -> ReconstructionSummary {
        ReconstructionSummary {
            n: self.n,
            m: self.m,
            s: self.s,
            missing_count: self.missing.len(),
            spurious_count: self.spurious.len(),
            exact: self.exact,
        }
    }
}

/// Encodes every search of `set` against `g`, reconstructs, and diffs the
/// result against the true edge set.
pub fn verify_reconstruction(g: &Graph, set: &SampleSet, s: usize) -> Result<ReconstructionReport> {
    let mut seqs = Vec::with_capacity(set.len());
    for item in &set.items {
        match item {
            SampleItem::Search(r) => seqs.push(r.visit_order.clone()),
            SampleItem::Walk(_) => {
                return Err(Error::InvalidArgument("reconstruction takes a set of searches".into()))
            }
        }
    }
    let encs = seqs
        .iter()
        .map(|q| adjacency_encoding(g, q, s))
        .collect::<Result<Vec<_>>>()?;
    let recovered_edges = reconstruct_from_searches(g.node_count(), &seqs, &encs, s)?;
    let truth = g.edge_set();
    let missing: BTreeSet<Edge> = truth.difference(&recovered_edges).copied().collect();
    let spurious: BTreeSet<Edge> = recovered_edges.difference(&truth).copied().collect();
    Ok(ReconstructionReport {
        n: g.node_count(),
        m: set.len(),
        s,
        exact: missing.is_empty() && spurious.is_empty(),
        recovered_edges,
        missing,
        spurious,
    })
}
