//! Sampling and expressivity lab for random walks and random depth-first
//! searches on graphs.
//!
//! * [`graph`] and [`generators`]: simple undirected graphs, edge lists and
//!   seeded families.
//! * [`samplers`]: walk policies, random DFS and exact DFS enumeration.
//! * [`encodings`]: identity, adjacency and anonymous encodings.
//! * [`coverage`]: coverage accounting, edge-inclusion probabilities, the
//!   logarithmic sample-size bound and cover times.
//! * [`wl`]: 1-WL and walk-based refinement, unfolding trees.
//! * [`invariance`]: exact and sampled isomorphism-invariance checks.
//! * [`reconstruct`]: edge recovery from searches plus adjacency encodings.

pub mod bench;
pub mod catalog;
pub mod coverage;
pub mod encodings;
pub mod error;
pub mod generators;
pub mod graph;
pub mod invariance;
pub mod reconstruct;
pub mod rng;
pub mod samplers;
pub mod wl;

pub use error::{Error, Result};
pub use generators::{gen_family, Family};
pub use graph::{edge, DegreeStats, Edge, Graph, Permutation};
pub use samplers::{
    sample_dfs, sample_set, sample_walk, SampleItem, SampleKind, SampleParams, SampleSet,
    SearchRecord, WalkPolicy, WalkRecord,
};
