//! Wall-clock cost per sample of walks (length `n`) against searches.
//!
//! Timings are inherently machine dependent; only the sampled sequences are
//! seeded.

use std::hint::black_box;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{gen_family, Family};
use crate::rng::seeded;
use crate::samplers::{dfs_from, walk_from, SampleKind, WalkPolicy};

pub const BENCH_CSV_HEADER: &str = "kind,n,m,mean_us";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub kind: SampleKind,
    pub n: usize,
    pub m: usize,
    /// Microseconds per sample, best of the repeats.
    pub mean_us: f64,
}

impl BenchRow {
    pub fn to_csv_line(&self) -> String {
        format!("{},{},{},{:.4}", self.kind, self.n, self.m, self.mean_us)
    }
}

pub fn bench_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(BENCH_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}

/// Times batches of `m` samples of each kind on `cycle(n)` for every size
/// and keeps the fastest of `repeats` batches. Batches are interleaved
/// across sizes and kinds so that slow periods on a shared machine spread
/// over all configurations. Runs on the calling thread.
pub fn bench_cycles(sizes: &[usize], m: usize, repeats: usize, seed: u64) -> Result<Vec<BenchRow>> {
    if m == 0 || repeats == 0 {
        return Err(Error::InvalidArgument("m and repeats must be >= 1".into()));
    }
    let graphs = sizes
        .iter()
        .map(|&n| gen_family(&Family::Cycle { n }, seed))
        .collect::<Result<Vec<_>>>()?;
    let kinds = [SampleKind::Walks, SampleKind::Searches];
    let mut best = vec![f64::INFINITY; sizes.len() * kinds.len()];
    for rep in 0..repeats {
        for (gi, g) in graphs.iter().enumerate() {
            let n = g.node_count();
            for (ki, &kind) in kinds.iter().enumerate() {
                let mut rng = seeded(seed ^ rep as u64);
                let t0 = Instant::now();
                for _ in 0..m {
                    let start = rng.random_range(0..n);
                    match kind {
                        SampleKind::Walks => {
                            black_box(walk_from(g, start, WalkPolicy::Uniform, n, &mut rng));
                        }
                        SampleKind::Searches => {
                            black_box(dfs_from(g, start, &mut rng));
                        }
                    }
                }
                let slot = &mut best[gi * kinds.len() + ki];
                *slot = slot.min(t0.elapsed().as_secs_f64() * 1e6 / m as f64);
            }
        }
    }
    Ok(sizes
        .iter()
        .enumerate()
        .flat_map(|(gi, &n)| {
            let best = &best;
            kinds.iter().enumerate().map(move |(ki, &kind)| BenchRow {
                kind,
                n,
                m,
                mean_us: best[gi * kinds.len() + ki],
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_and_header() {
        let rows = bench_cycles(&[8, 16], 10, 2, 0).unwrap();
        assert_eq!(rows.len(), 4);
        let csv = bench_to_csv(&rows);
        assert!(csv.starts_with("kind,n,m,mean_us\nwalks,8,10,"));
        assert!(rows.iter().all(|r| r.mean_us > 0.0));
    }
}
