//! Positional encodings attached to walk and search sequences.
//!
//! For a sequence `w_0..w_l` and window `s`, row `i >= 1` compares `w_i`
//! with `w_{i-j}` for every lag whose index `i - j` exists; row 0 has no
//! history and stays zero.
//!
//! * identity: `id[i][j] = 1` iff `w_i == w_{i-j}`, for `j in 0..s`;
//! * adjacency: `adj[i][j-1] = 1` iff `(w_i, w_{i-j})` is an edge, for
//!   `j in 1..s`.
//!
//! Identity column 0 compares a node with itself and is 1 on every row but
//! the first. [`IdentityColumns::Shifted`] offers lags `1..=s` instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::samplers::SearchRecord;

/// Dense row-major 0/1 matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryMatrix {
    pub shape: [usize; 2],
    pub data: Vec<Vec<u8>>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix {
            shape: [rows, cols],
            data: vec![vec![0; cols]; rows],
        }
    }

    pub fn rows(&self) -> usize {
        self.shape[0]
    }

    pub fn cols(&self) -> usize {
        self.shape[1]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i][j] != 0
    }

    fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.data[i][j] = bit as u8;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityColumns {
    /// Lags `0..s`, column 0 being the degenerate self-comparison.
    #[default]
    Literal,
    /// Lags `1..=s`.
    Shifted,
}

pub fn identity_encoding(seq: &[usize], s: usize, columns: IdentityColumns) -> Result<BinaryMatrix> {
    if s == 0 {
        return Err(Error::InvalidArgument("window must be >= 1".into()));
    }
    let lag0 = match columns {
        IdentityColumns::Literal => 0,
        IdentityColumns::Shifted => 1,
    };
    let mut m = BinaryMatrix::zeros(seq.len(), s);
    for i in 0..seq.len() {
        for col in 0..s {
            let j = col + lag0;
            if i >= 1 && i >= j && seq[i] == seq[i - j] {
                m.set(i, col, true);
            }
        }
    }
    Ok(m)
}

/// Marks window pairs that are true edges. The sequence need not be a walk;
/// for DFS orders a 0 in the first column flags a backjump.
pub fn adjacency_encoding(g: &Graph, seq: &[usize], s: usize) -> Result<BinaryMatrix> {
    if s < 2 {
        return Err(Error::InvalidArgument("adjacency window must be >= 2".into()));
    }
    for &v in seq {
        g.check_node(v)?;
    }
    let mut m = BinaryMatrix::zeros(seq.len(), s - 1);
    for i in 0..seq.len() {
        for j in 1..s {
            if i >= j && g.has_edge(seq[i], seq[i - j]) {
                m.set(i, j - 1, true);
            }
        }
    }
    Ok(m)
}

/// Identity and adjacency blocks side by side, `d_pe = 2s - 1` columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosEncoding {
    pub identity: BinaryMatrix,
    pub adjacency: BinaryMatrix,
    pub window: usize,
}

impl PosEncoding {
    pub fn new(g: &Graph, seq: &[usize], s: usize) -> Result<Self> {
        Ok(PosEncoding {
            identity: identity_encoding(seq, s, IdentityColumns::Literal)?,
            adjacency: adjacency_encoding(g, seq, s)?,
            window: s,
        })
    }

    pub fn d_pe(&self) -> usize {
        self.identity.cols() + self.adjacency.cols()
    }

    /// Concatenated rows `[id | adj]`.
    pub fn concat(&self) -> BinaryMatrix {
        let data: Vec<Vec<u8>> = self
            .identity
            .data
            .iter()
            .zip(&self.adjacency.data)
            .map(|(a, b)| a.iter().chain(b).copied().collect())
            .collect();
        BinaryMatrix {
            shape: [self.identity.rows(), self.d_pe()],
            data,
        }
    }
}

/// First-appearance relabeling: labels start at 1 and each new node takes
/// the next unused label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnonSequence {
    pub labels: Vec<usize>,
}

pub fn anonymous_encoding(seq: &[usize]) -> Result<AnonSequence> {
    if seq.is_empty() {
        return Err(Error::InvalidArgument("anonymous encoding of an empty sequence".into()));
    }
    let mut first: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let labels = seq
        .iter()
        .map(|&v| {
            let next = first.len() + 1;
            *first.entry(v).or_insert(next)
        })
        .collect();
    Ok(AnonSequence { labels })
}

/// Node tags `1..=n` in first-visit order of one search, shared by every
/// search of the same set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagMap {
    /// `tags[v]` is the tag of node `v`.
    pub tags: Vec<usize>,
}

impl TagMap {
    pub fn tag(&self, v: usize) -> usize {
        self.tags[v]
    }

    pub fn apply(&self, seq: &[usize]) -> Vec<usize> {
        seq.iter().map(|&v| self.tags[v]).collect()
    }
}

pub fn anonymous_tags(first_search: &SearchRecord) -> Result<TagMap> {
    let n = first_search.visit_order.len();
    let mut tags = vec![0; n];
    for (i, &v) in first_search.visit_order.iter().enumerate() {
        if v >= n || tags[v] != 0 {
            return Err(Error::InvalidArgument(
                "search does not visit every node exactly once".into(),
            ));
        }
        tags[v] = i + 1;
    }
    Ok(TagMap { tags })
}
