//! Exact and sampled checks that random DFS visit orders transform with a
//! relabeling of the graph.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Permutation};
use crate::rng::{derive_seed, trial_rng};
use crate::samplers::{dfs_from, enumerate_dfs};

/// Exact law of the visit order of a random DFS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceDistribution {
    pub support: BTreeMap<Vec<usize>, BigRational>,
}

impl SequenceDistribution {
    pub fn total(&self) -> BigRational {
        self.support.values().fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn prob(&self, seq: &[usize]) -> BigRational {
        self.support.get(seq).cloned().unwrap_or_else(BigRational::zero)
    }
}

pub fn dfs_distribution(g: &Graph, budget: u64) -> Result<SequenceDistribution> {
    let mut support: BTreeMap<Vec<usize>, BigRational> = BTreeMap::new();
    for o in enumerate_dfs(g, budget)? {
        *support.entry(o.record.visit_order).or_insert_with(BigRational::zero) += o.probability;
    }
    Ok(SequenceDistribution { support })
}

/// Maps every support sequence elementwise through `perm`.
pub fn pushforward(d: &SequenceDistribution, perm: &Permutation) -> Result<SequenceDistribution> {
    let mut support = BTreeMap::new();
    for (seq, p) in &d.support {
        if let Some(&v) = seq.iter().find(|&&v| v >= perm.len()) {
            return Err(Error::NodeOutOfRange { node: v, n: perm.len() });
        }
        support.insert(perm.map_seq(seq), p.clone());
    }
    Ok(SequenceDistribution { support })
}

/// Largest absolute difference between two distributions, over the union of
/// their supports.
pub fn sup_distance(a: &SequenceDistribution, b: &SequenceDistribution) -> BigRational {
    let mut worst = BigRational::zero();
    for seq in a.support.keys().chain(b.support.keys()) {
        let d = (a.prob(seq) - b.prob(seq)).abs();
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// Sup-norm gap between the pushforward of the law on `g` and the law on
/// the relabeled graph. Zero when the sampler is isomorphism invariant.
pub fn invariance_exact(g: &Graph, perm: &Permutation, budget: u64) -> Result<BigRational> {
    let h = g.relabel(perm)?;
    let pushed = pushforward(&dfs_distribution(g, budget)?, perm)?;
    Ok(sup_distance(&pushed, &dfs_distribution(&h, budget)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledComparison {
    pub trials: usize,
    /// TV between pushed-forward samples of `g` and samples of the target.
    pub tv: f64,
    /// TV between two independent pushed-forward batches of `g`.
    pub baseline_tv: f64,
    /// 95th percentile of TV under the pooled null distribution.
    pub threshold: f64,
    pub pass: bool,
}

/// Bootstrap resamples used when none is given.
pub const DEFAULT_BOOTSTRAP_REPS: usize = 200;

fn sample_orders(g: &Graph, perm: &Permutation, trials: usize, seed: u64) -> Vec<Vec<usize>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let root = rng.random_range(0..g.node_count());
            perm.map_seq(&dfs_from(g, root, &mut rng).visit_order)
        })
        .collect()
}

fn tv_counts(a: &[u32], b: &[u32], na: usize, nb: usize) -> f64 {
    0.5 * a
        .iter()
        .zip(b)
        .map(|(&x, &y)| (x as f64 / na as f64 - y as f64 / nb as f64).abs())
        .sum::<f64>()
}

/// Two-sample comparison of `perm`-pushed DFS orders on `g` against DFS
/// orders on `target` (same node count).
///
/// The test statistic is the empirical TV distance. Its null distribution
/// comes from a pooled bootstrap: both batches are merged and two batches of
/// the original size are redrawn with replacement, `reps` times.
pub fn compare_sampled(
    g: &Graph,
    perm: &Permutation,
    target: &Graph,
    trials: usize,
    reps: usize,
    seed: u64,
) -> Result<SampledComparison> {
    if trials == 0 || reps == 0 {
        return Err(Error::InvalidArgument("trials and reps must be >= 1".into()));
    }
    if perm.len() != g.node_count() || target.node_count() != g.node_count() {
        return Err(Error::Shape("graphs and permutation must share a node count".into()));
    }
    g.ensure_connected()?;
    target.ensure_connected()?;
    let identity = Permutation::identity(g.node_count());
    let first = sample_orders(g, perm, trials, derive_seed(seed, 1));
    let second = sample_orders(target, &identity, trials, derive_seed(seed, 2));
    let control = sample_orders(g, perm, trials, derive_seed(seed, 2));

    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    // Distinct orders get dense ids so counting is array indexing.
    let mut ids = |batch: &'_ [Vec<usize>]| -> Vec<usize> {
        batch
            .iter()
            .map(|s| {
                let next = index.len();
                *index.entry(s.clone()).or_insert(next)
            })
            .collect()
    };
    let a = ids(&first);
    let b = ids(&second);
    let c = ids(&control);
    let k = index.len();
    let counts = |xs: &[usize]| {
        let mut v = vec![0u32; k];
        for &x in xs {
            v[x] += 1;
        }
        v
    };
    let (ca, cb, cc) = (counts(&a), counts(&b), counts(&c));
    let tv = tv_counts(&ca, &cb, trials, trials);
    let baseline_tv = tv_counts(&ca, &cc, trials, trials);

    let pooled: Vec<usize> = a.iter().chain(&b).copied().collect();
    let boot_seed = derive_seed(seed, 3);
    let mut null: Vec<f64> = (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = trial_rng(boot_seed, r);
            let mut x = vec![0u32; k];
            let mut y = vec![0u32; k];
            for _ in 0..trials {
                x[pooled[rng.random_range(0..pooled.len())]] += 1;
                y[pooled[rng.random_range(0..pooled.len())]] += 1;
            }
            tv_counts(&x, &y, trials, trials)
        })
        .collect();
    null.sort_by(f64::total_cmp);
    let threshold = null[((0.95 * reps as f64).ceil() as usize).clamp(1, reps) - 1];
    Ok(SampledComparison {
        trials,
        tv,
        baseline_tv,
        threshold,
        pass: tv <= threshold,
    })
}

/// Sampled invariance check of `g` against `relabel(g, perm)`.
pub fn invariance_sampled(
    g: &Graph,
    perm: &Permutation,
    trials: usize,
    reps: usize,
    seed: u64,
) -> Result<SampledComparison> {
    let h = g.relabel(perm)?;
    compare_sampled(g, perm, &h, trials, reps, seed)
}

/// Verdict record for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceVerdict {
    pub graph: String,
    pub perm_seed: u64,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tv: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline_tv: Option<f64>,
    pub pass: bool,
}

impl InvarianceVerdict {
    pub fn exact(graph: &str, perm_seed: u64, discrepancy: &BigRational) -> Self {
        InvarianceVerdict {
            graph: graph.to_string(),
            perm_seed,
            mode: "exact".into(),
            discrepancy: Some(discrepancy.to_string()),
            tv: None,
            baseline_tv: None,
            pass: discrepancy.is_zero(),
        }
    }

    pub fn sampled(graph: &str, perm_seed: u64, cmp: &SampledComparison) -> Self {
        InvarianceVerdict {
            graph: graph.to_string(),
            perm_seed,
            mode: "sampled".into(),
            discrepancy: None,
            tv: Some(cmp.tv),
            baseline_tv: Some(cmp.baseline_tv),
            pass: cmp.pass,
        }
    }
}
