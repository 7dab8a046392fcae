//! Walk and search samplers.
//!
//! Every sampler is a pure function of the graph, its parameters and the RNG
//! it is handed. [`sample_set`] derives one RNG stream per item so a set is
//! reproducible from its seed regardless of how many threads build it.

mod dfs;
mod enumerate;
mod walk;

pub use dfs::{dfs_from, sample_dfs, validate_search, SearchRecord};
pub use enumerate::{enumerate_dfs, DfsOutcome, DEFAULT_ENUMERATION_BUDGET};
pub use walk::{
    sample_walk, sample_walk_weighted, walk_from, MinDegreeWeight, TransitionWeight, WalkPolicy,
    WalkRecord, Walker,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::trial_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    Walks,
    Searches,
}

impl std::str::FromStr for SampleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "walks" | "walk" => Ok(SampleKind::Walks),
            "searches" | "search" => Ok(SampleKind::Searches),
            other => Err(Error::InvalidArgument(format!("unknown sample kind {other:?}"))),
        }
    }
}

impl std::fmt::Display for SampleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SampleKind::Walks => "walks",
            SampleKind::Searches => "searches",
        })
    }
}

/// Walk parameters; ignored for searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleParams {
    pub length: usize,
    pub policy: WalkPolicy,
}

impl SampleParams {
    pub fn walks(length: usize, policy: WalkPolicy) -> Self {
        SampleParams { length, policy }
    }

    /// Uniform walks of length `|V|`.
    pub fn for_graph(g: &Graph) -> Self {
        SampleParams {
            length: g.node_count().max(1),
            policy: WalkPolicy::Uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SampleItem {
    Walk(WalkRecord),
    Search(SearchRecord),
}

impl SampleItem {
    /// Node sequence: the walk itself or the first-visit order.
    pub fn sequence(&self) -> &[usize] {
        match self {
            SampleItem::Walk(w) => &w.nodes,
            SampleItem::Search(s) => &s.visit_order,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSet {
    pub kind: SampleKind,
    pub seed: u64,
    pub items: Vec<SampleItem>,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn searches(&self) -> impl Iterator<Item = &SearchRecord> {
        self.items.iter().filter_map(|it| match it {
            SampleItem::Search(s) => Some(s),
            SampleItem::Walk(_) => None,
        })
    }

    pub fn walks(&self) -> impl Iterator<Item = &WalkRecord> {
        self.items.iter().filter_map(|it| match it {
            SampleItem::Walk(w) => Some(w),
            SampleItem::Search(_) => None,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sample sets always serialize")
    }
}

/// Draws `m` independent records; item `i` uses stream `i` of `seed`.
pub fn sample_set(
    g: &Graph,
    kind: SampleKind,
    m: usize,
    params: SampleParams,
    seed: u64,
) -> Result<SampleSet> {
    if m == 0 {
        return Err(Error::InvalidArgument("sample set needs m >= 1".into()));
    }
    g.ensure_connected()?;
    if kind == SampleKind::Walks {
        walk::check_walkable(g, params.length)?;
    }
    let items = (0..m as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            match kind {
                SampleKind::Walks => {
                    let start = rand::Rng::random_range(&mut rng, 0..g.node_count());
                    SampleItem::Walk(walk_from(g, start, params.policy, params.length, &mut rng))
                }
                SampleKind::Searches => {
                    let root = rand::Rng::random_range(&mut rng, 0..g.node_count());
                    SampleItem::Search(dfs_from(g, root, &mut rng))
                }
            }
        })
        .collect();
    Ok(SampleSet { kind, seed, items })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_family, Family};

    #[test]
    fn sets_are_reproducible() {
        let g = gen_family(&Family::HexChain { k: 2 }, 0).unwrap();
        for kind in [SampleKind::Searches, SampleKind::Walks] {
            let a = sample_set(&g, kind, 3, SampleParams::for_graph(&g), 1).unwrap();
            let b = sample_set(&g, kind, 3, SampleParams::for_graph(&g), 1).unwrap();
            assert_eq!(a.to_json(), b.to_json());
        }
    }

    #[test]
    fn single_edge_walk_set() {
        let g = gen_family(&Family::Path { n: 2 }, 0).unwrap();
        let set = sample_set(&g, SampleKind::Walks, 2, SampleParams::walks(1, WalkPolicy::Uniform), 3).unwrap();
        for w in set.walks() {
            assert!(w.nodes == [0, 1] || w.nodes == [1, 0]);
        }
    }

    #[test]
    fn one_search_on_c6_covers_five_edges() {
        let g = gen_family(&Family::Cycle { n: 6 }, 0).unwrap();
        let set = sample_set(&g, SampleKind::Searches, 1, SampleParams::for_graph(&g), 9).unwrap();
        let edges: std::collections::BTreeSet<_> = set.searches().flat_map(|s| s.tree_edge_set()).collect();
        assert_eq!(edges.len(), 5);
    }

    #[test]
    fn json_shape() {
        let g = gen_family(&Family::Path { n: 3 }, 0).unwrap();
        let set = sample_set(&g, SampleKind::Searches, 1, SampleParams::for_graph(&g), 0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&set.to_json()).unwrap();
        assert_eq!(v["kind"], "searches");
        assert_eq!(v["seed"], 0);
        assert!(v["items"][0]["visit_order"].is_array());
        assert!(v["items"][0]["tree_edges"].is_array());
        assert!(v["items"][0]["root"].is_number());
        let back: SampleSet = serde_json::from_str(&set.to_json()).unwrap();
        assert_eq!(back, set);

        let w = sample_set(&g, SampleKind::Walks, 1, SampleParams::for_graph(&g), 0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&w.to_json()).unwrap();
        assert!(v["items"][0]["nodes"].is_array());
        assert!(v["items"][0]["start"].is_number());
        let back: SampleSet = serde_json::from_str(&w.to_json()).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn rejects_empty_and_disconnected() {
        let g = gen_family(&Family::Path { n: 3 }, 0).unwrap();
        assert!(sample_set(&g, SampleKind::Searches, 0, SampleParams::for_graph(&g), 0).is_err());
        let two = g.disjoint_union(&g);
        assert_eq!(
            sample_set(&two, SampleKind::Searches, 1, SampleParams::for_graph(&two), 0),
            Err(Error::Disconnected)
        );
    }
}
