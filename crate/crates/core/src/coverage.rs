//! Coverage accounting and edge-coverage bounds for walks and searches.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph};
use crate::rng::{derive_seed, trial_rng};
use crate::samplers::{
    dfs_from, enumerate_dfs, walk_from, SampleItem, SampleKind, SampleParams, SampleSet, WalkPolicy,
    Walker,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub node_fraction: f64,
    pub edge_fraction: f64,
    pub covered_edges: BTreeSet<Edge>,
    /// `N_i`: how many sequence positions hold node `i`, over the whole set.
    pub occurrence_counts: Vec<usize>,
}

/// Node and edge coverage of a sample set. Walks cover the pairs they
/// traverse; searches cover their tree edges.
pub fn coverage_report(g: &Graph, set: &SampleSet) -> Result<CoverageReport> {
    let n = g.node_count();
    let mut occurrence_counts = vec![0usize; n];
    let mut covered_edges = BTreeSet::new();
    for item in &set.items {
        for &v in item.sequence() {
            g.check_node(v)?;
            occurrence_counts[v] += 1;
        }
        match item {
            SampleItem::Walk(w) => {
                for p in w.nodes.windows(2) {
                    if !g.has_edge(p[0], p[1]) {
                        return Err(Error::MissingEdge(p[0], p[1]));
                    }
                    covered_edges.insert(edge(p[0], p[1]));
                }
            }
            SampleItem::Search(s) => {
                for &(a, b) in &s.tree_edges {
                    g.check_node(a)?;
                    g.check_node(b)?;
                    if !g.has_edge(a, b) {
                        return Err(Error::MissingEdge(a, b));
                    }
                    covered_edges.insert(edge(a, b));
                }
            }
        }
    }
    let covered_nodes = occurrence_counts.iter().filter(|&&c| c > 0).count();
    Ok(CoverageReport {
        node_fraction: fraction(covered_nodes, n),
        edge_fraction: fraction(covered_edges.len(), g.edge_count()),
        covered_edges,
        occurrence_counts,
    })
}

fn fraction(num: usize, den: usize) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

/// `S_u(e)`: neighbors `w != v` of `u` that start a `u -> v` path avoiding
/// the edge `e = (u, v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeSet {
    pub edge: Edge,
    pub side: usize,
    pub members: Vec<usize>,
    pub tau: usize,
}

pub fn escape_set(g: &Graph, e: Edge, side: usize) -> Result<EscapeSet> {
    if !g.has_edge(e.0, e.1) {
        return Err(Error::MissingEdge(e.0, e.1));
    }
    let (u, v) = if side == e.0 {
        (e.0, e.1)
    } else if side == e.1 {
        (e.1, e.0)
    } else {
        return Err(Error::InvalidArgument(format!("{side} is not an endpoint of {e:?}")));
    };
    // A simple path u -> w -> ... -> v never returns to u, so w qualifies
    // iff it reaches v in G - u.
    let mut reached = vec![false; g.node_count()];
    reached[v] = true;
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        for &y in g.neighbors(x) {
            if y != u && !reached[y] {
                reached[y] = true;
                stack.push(y);
            }
        }
    }
    let members: Vec<usize> = g.neighbors(u).iter().copied().filter(|&w| w != v && reached[w]).collect();
    Ok(EscapeSet {
        edge: edge(u, v),
        side: u,
        tau: members.len(),
        members,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InclusionMode {
    Exact { budget: u64 },
    MonteCarlo { trials: usize, seed: u64 },
}

/// Probability that an edge lands in a random DFS tree, next to its lower
/// bounds `min(1/(tau_u+1), 1/(tau_v+1)) >= 1/max(deg u, deg v) >= 1/d_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub edge: Edge,
    #[serde(with = "ratio_string::option")]
    pub exact: Option<BigRational>,
    pub estimate: f64,
    /// Binomial standard error; zero in exact mode.
    pub stderr: f64,
    pub tau_u: usize,
    pub tau_v: usize,
    #[serde(with = "ratio_string")]
    pub tau_bound: BigRational,
    #[serde(with = "ratio_string")]
    pub degree_bound: BigRational,
    #[serde(with = "ratio_string")]
    pub dmax_bound: BigRational,
    /// Exact mode: the full chain holds exactly. Monte-Carlo mode: the
    /// estimate is within three standard errors of clearing the tau bound.
    pub bounds_hold: bool,
}

fn unit_fraction(d: usize) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(d.max(1)))
}

fn inclusion_bounds(g: &Graph, e: Edge) -> Result<(usize, usize, BigRational, BigRational, BigRational)> {
    let tau_u = escape_set(g, e, e.0)?.tau;
    let tau_v = escape_set(g, e, e.1)?.tau;
    let tau_bound = unit_fraction(tau_u + 1).min(unit_fraction(tau_v + 1));
    let degree_bound = unit_fraction(g.degree(e.0).max(g.degree(e.1)));
    let dmax_bound = unit_fraction(g.max_degree());
    Ok((tau_u, tau_v, tau_bound, degree_bound, dmax_bound))
}

pub fn edge_inclusion_prob(g: &Graph, e: Edge, mode: InclusionMode) -> Result<InclusionReport> {
    let e = edge(e.0, e.1);
    let (tau_u, tau_v, tau_bound, degree_bound, dmax_bound) = inclusion_bounds(g, e)?;
    let (exact, estimate, stderr) = match mode {
        InclusionMode::Exact { budget } => {
            let p = exact_inclusion_all(g, budget)?.remove(&e).unwrap_or_else(BigRational::zero);
            let f = p.to_f64().unwrap_or(f64::NAN);
            (Some(p), f, 0.0)
        }
        InclusionMode::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return Err(Error::InvalidArgument("trials must be >= 1".into()));
            }
            g.ensure_connected()?;
            let hits: usize = (0..trials as u64)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(seed, t);
                    let root = rng.random_range(0..g.node_count());
                    let rec = dfs_from(g, root, &mut rng);
                    rec.tree_edges.iter().any(|&(a, b)| edge(a, b) == e) as usize
                })
                .sum();
            let p = hits as f64 / trials as f64;
            (None, p, (p * (1.0 - p) / trials as f64).sqrt())
        }
    };
    let bounds_hold = match &exact {
        Some(p) => *p >= tau_bound && tau_bound >= degree_bound && degree_bound >= dmax_bound,
        None => estimate + 3.0 * stderr >= tau_bound.to_f64().unwrap_or(0.0),
    };
    Ok(InclusionReport {
        edge: e,
        exact,
        estimate,
        stderr,
        tau_u,
        tau_v,
        tau_bound,
        degree_bound,
        dmax_bound,
        bounds_hold,
    })
}

/// Exact inclusion probability of every edge, from one enumeration.
pub fn exact_inclusion_all(g: &Graph, budget: u64) -> Result<BTreeMap<Edge, BigRational>> {
    let outcomes = enumerate_dfs(g, budget)?;
    let mut probs: BTreeMap<Edge, BigRational> = g.edges().map(|e| (e, BigRational::zero())).collect();
    for o in outcomes {
        for &(a, b) in &o.record.tree_edges {
            *probs.get_mut(&edge(a, b)).expect("tree edges are graph edges") += &o.probability;
        }
    }
    Ok(probs)
}

/// Inputs of the logarithmic sample-size bound
/// `m >= ln(C n / delta) / ln(d_max / (d_max - 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundQuery {
    #[serde(rename = "C")]
    pub c: f64,
    pub n: usize,
    pub d_max: usize,
    pub delta: f64,
}

impl BoundQuery {
    /// Uses the graph's own `|E|/|V|` and maximum degree.
    pub fn from_graph(g: &Graph, delta: f64) -> Self {
        let stats = g.degree_stats();
        BoundQuery {
            c: stats.sparsity_c,
            n: g.node_count(),
            d_max: stats.d_max,
            delta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundAnswer {
    pub m_required: usize,
    /// `d_max <= 1`: the graph is a single edge or a point and one search
    /// covers it.
    pub degenerate: bool,
}

pub fn sample_bound_m(q: &BoundQuery) -> Result<BoundAnswer> {
    if !(q.delta > 0.0 && q.delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta must lie in (0, 1), got {}", q.delta)));
    }
    let cn = q.c * q.n as f64;
    if cn.is_nan() || cn < 1.0 {
        return Err(Error::InvalidArgument(format!("C * n must be >= 1, got {cn}")));
    }
    if q.d_max <= 1 {
        return Ok(BoundAnswer {
            m_required: 1,
            degenerate: true,
        });
    }
    let d = q.d_max as f64;
    let m = ((cn / q.delta).ln() / (d / (d - 1.0)).ln()).ceil();
    Ok(BoundAnswer {
        m_required: (m as usize).max(1),
        degenerate: false,
    })
}

/// Monte-Carlo check of the bound, serialized for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    #[serde(flatten)]
    pub query: BoundQuery,
    pub m_required: usize,
    pub empirical_success: f64,
    pub trials: usize,
}

impl BoundCheck {
    /// One-sided test: the observed failure rate may exceed `delta` by at
    /// most two binomial standard errors.
    pub fn passes(&self) -> bool {
        let fail = 1.0 - self.empirical_success;
        let se = (self.query.delta * (1.0 - self.query.delta) / self.trials as f64).sqrt();
        fail <= self.query.delta + 2.0 * se
    }
}

pub fn check_bound(g: &Graph, delta: f64, trials: usize, seed: u64) -> Result<BoundCheck> {
    let query = BoundQuery::from_graph(g, delta);
    let m = sample_bound_m(&query)?.m_required;
    let empirical_success = full_coverage_probability(g, m, trials, seed)?;
    Ok(BoundCheck {
        query,
        m_required: m,
        empirical_success,
        trials,
    })
}

/// Fraction of trials in which `m` independent DFS trees cover every edge.
pub fn full_coverage_probability(g: &Graph, m: usize, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    g.ensure_connected()?;
    let hits: usize = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let covered = searches_to_cover(g, m, &mut trial_rng(seed, t));
            covered.is_some() as usize
        })
        .sum();
    Ok(hits as f64 / trials as f64)
}

/// Number of searches, at most `max_m`, after which the union of trees
/// first covers every edge.
pub fn searches_to_cover<R: Rng + ?Sized>(g: &Graph, max_m: usize, rng: &mut R) -> Option<usize> {
    let n = g.node_count();
    if n == 0 {
        return Some(0);
    }
    let mut covered = vec![false; 2 * g.edge_count()];
    let mut count = 0;
    if count == g.edge_count() {
        return Some(0);
    }
    for i in 1..=max_m {
        let root = rng.random_range(0..n);
        let rec = dfs_from(g, root, rng);
        for &(a, b) in &rec.tree_edges {
            let s = g.slot(a, b).expect("tree edges are graph edges");
            if !std::mem::replace(&mut covered[s], true) {
                count += 1;
            }
        }
        if count == g.edge_count() {
            return Some(i);
        }
    }
    None
}

/// Per-trial counts from [`searches_to_cover`], trial `t` on stream `t`.
pub fn searches_to_cover_trials(g: &Graph, max_m: usize, trials: usize, seed: u64) -> Result<Vec<Option<usize>>> {
    g.ensure_connected()?;
    Ok((0..trials as u64)
        .into_par_iter()
        .map(|t| searches_to_cover(g, max_m, &mut trial_rng(seed, t)))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverTarget {
    Node,
    Edge,
}

impl std::str::FromStr for CoverTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "node" | "nodes" => Ok(CoverTarget::Node),
            "edge" | "edges" => Ok(CoverTarget::Edge),
            other => Err(Error::InvalidArgument(format!("unknown cover target {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverTimeReport {
    pub policy: WalkPolicy,
    pub target: CoverTarget,
    pub trials: usize,
    /// Trials that hit `cap` before covering; excluded from the statistics.
    pub censored: usize,
    pub cap: usize,
    pub mean: Option<f64>,
    pub median: Option<f64>,
    pub p90: Option<f64>,
    pub min: Option<usize>,
    pub max: Option<usize>,
}

/// Cap used when none is given: `50 n^2` steps.
pub fn default_cover_cap(g: &Graph) -> usize {
    50 * g.node_count() * g.node_count()
}

/// Steps until a walk from a uniform start has visited every node (or
/// traversed every edge), censored at `cap`.
pub fn cover_time_estimate(
    g: &Graph,
    policy: WalkPolicy,
    target: CoverTarget,
    trials: usize,
    cap: usize,
    seed: u64,
) -> Result<CoverTimeReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    g.ensure_connected()?;
    if g.node_count() > 1 && g.edge_count() == 0 {
        return Err(Error::Disconnected);
    }
    let steps: Vec<Option<usize>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| cover_once(g, policy, target, cap, &mut trial_rng(seed, t)))
        .collect();
    let mut done: Vec<usize> = steps.iter().flatten().copied().collect();
    done.sort_unstable();
    let censored = trials - done.len();
    let quantile = |q: f64| -> Option<f64> {
        if done.is_empty() {
            return None;
        }
        let pos = q * (done.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        Some(done[lo] as f64 + (done[hi] as f64 - done[lo] as f64) * (pos - lo as f64))
    };
    Ok(CoverTimeReport {
        policy,
        target,
        trials,
        censored,
        cap,
        mean: (!done.is_empty()).then(|| done.iter().sum::<usize>() as f64 / done.len() as f64),
        median: quantile(0.5),
        p90: quantile(0.9),
        min: done.first().copied(),
        max: done.last().copied(),
    })
}

fn cover_once<R: Rng + ?Sized>(
    g: &Graph,
    policy: WalkPolicy,
    target: CoverTarget,
    cap: usize,
    rng: &mut R,
) -> Option<usize> {
    let n = g.node_count();
    let start = rng.random_range(0..n);
    let goal = match target {
        CoverTarget::Node => n,
        CoverTarget::Edge => g.edge_count(),
    };
    let mut seen = vec![false; match target {
        CoverTarget::Node => n,
        CoverTarget::Edge => 2 * g.edge_count(),
    }];
    let mut count = 0;
    if target == CoverTarget::Node {
        seen[start] = true;
        count = 1;
    }
    if count == goal {
        return Some(0);
    }
    let mut walker = Walker::new(g, start, policy);
    for step in 1..=cap {
        let prev = walker.current();
        let next = walker.step(rng);
        let idx = match target {
            CoverTarget::Node => next,
            CoverTarget::Edge => g.slot(prev, next).expect("walk steps follow edges"),
        };
        if !std::mem::replace(&mut seen[idx], true) {
            count += 1;
            if count == goal {
                return Some(step);
            }
        }
    }
    None
}

/// One sampler configuration in a coverage curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveKind {
    pub kind: SampleKind,
    pub params: SampleParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub kind: SampleKind,
    pub m: usize,
    pub node_frac_mean: f64,
    pub edge_frac_mean: f64,
    pub trials: usize,
    pub seed: u64,
}

pub const CURVE_CSV_HEADER: &str = "kind,m,node_frac_mean,edge_frac_mean,trials,seed";

impl CurveRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{:.6},{:.6},{},{}",
            self.kind, self.m, self.node_frac_mean, self.edge_frac_mean, self.trials, self.seed
        )
    }
}

pub fn curve_to_csv(rows: &[CurveRow]) -> String {
    let mut out = String::from(CURVE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}

/// Mean node and edge coverage after `m` samples, for each `m` in `m_list`.
///
/// Within a trial every `m` reads a prefix of the same sample stream, so
/// per-trial coverage is monotone in `m` by construction.
pub fn coverage_curve(
    g: &Graph,
    kinds: &[CurveKind],
    m_list: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<CurveRow>> {
    if m_list.is_empty() || m_list.contains(&0) {
        return Err(Error::InvalidArgument("m_list must be nonempty with entries >= 1".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    g.ensure_connected()?;
    let max_m = *m_list.iter().max().unwrap();
    let n = g.node_count();
    let mut rows = Vec::new();
    for (ki, ck) in kinds.iter().enumerate() {
        if ck.kind == SampleKind::Walks && (ck.params.length == 0 || g.edge_count() == 0) {
            return Err(Error::InvalidArgument("walks need length >= 1 and at least one edge".into()));
        }
        let kind_seed = derive_seed(seed, ki as u64);
        let per_trial: Vec<Vec<(f64, f64)>> = (0..trials as u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(kind_seed, t);
                let mut node_seen = vec![false; n];
                let mut edge_seen = vec![false; 2 * g.edge_count()];
                let (mut nodes, mut edges) = (0usize, 0usize);
                let mut after = Vec::with_capacity(max_m);
                for _ in 0..max_m {
                    let start = rng.random_range(0..n);
                    let (seq, pairs): (Vec<usize>, Vec<(usize, usize)>) = match ck.kind {
                        SampleKind::Walks => {
                            let w = walk_from(g, start, ck.params.policy, ck.params.length, &mut rng);
                            let pairs = w.nodes.windows(2).map(|p| (p[0], p[1])).collect();
                            (w.nodes, pairs)
                        }
                        SampleKind::Searches => {
                            let s = dfs_from(g, start, &mut rng);
                            (s.visit_order, s.tree_edges)
                        }
                    };
                    for v in seq {
                        if !std::mem::replace(&mut node_seen[v], true) {
                            nodes += 1;
                        }
                    }
                    for (a, b) in pairs {
                        let s = g.slot(a, b).expect("sampled pairs are edges");
                        if !std::mem::replace(&mut edge_seen[s], true) {
                            edges += 1;
                        }
                    }
                    after.push((fraction(nodes, n), fraction(edges, g.edge_count())));
                }
                m_list.iter().map(|&m| after[m - 1]).collect()
            })
            .collect();
        for (mi, &m) in m_list.iter().enumerate() {
            let (sn, se) = per_trial
                .iter()
                .fold((0.0, 0.0), |(a, b), row| (a + row[mi].0, b + row[mi].1));
            rows.push(CurveRow {
                kind: ck.kind,
                m,
                node_frac_mean: sn / trials as f64,
                edge_frac_mean: se / trials as f64,
                trials,
                seed,
            });
        }
    }
    Ok(rows)
}

/// Serde helpers writing rationals as `"p/q"` strings.
pub(crate) mod ratio_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&r.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|t| t.parse().map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_family, Family};
    use crate::samplers::{sample_set, DEFAULT_ENUMERATION_BUDGET};

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn fam(f: Family) -> Graph {
        gen_family(&f, 0).unwrap()
    }

    #[test]
    fn star_single_search_covers_all() {
        let g = fam(Family::Star { n: 4 });
        let set = sample_set(&g, SampleKind::Searches, 1, SampleParams::for_graph(&g), 3).unwrap();
        let r = coverage_report(&g, &set).unwrap();
        assert_eq!((r.node_fraction, r.edge_fraction), (1.0, 1.0));
    }

    #[test]
    fn c6_single_search_misses_one_edge() {
        let g = fam(Family::Cycle { n: 6 });
        for seed in 0..10 {
            let set = sample_set(&g, SampleKind::Searches, 1, SampleParams::for_graph(&g), seed).unwrap();
            let r = coverage_report(&g, &set).unwrap();
            assert_eq!(r.edge_fraction, 5.0 / 6.0);
            assert_eq!(r.node_fraction, 1.0);
            assert!(r.occurrence_counts.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn short_walk_coverage() {
        let g = fam(Family::Cycle { n: 6 });
        let set = SampleSet {
            kind: SampleKind::Walks,
            seed: 0,
            items: vec![SampleItem::Walk(crate::samplers::WalkRecord {
                nodes: vec![0, 1, 0],
                policy: WalkPolicy::Uniform,
                start: 0,
            })],
        };
        let r = coverage_report(&g, &set).unwrap();
        assert_eq!(r.node_fraction, 2.0 / 6.0);
        assert_eq!(r.edge_fraction, 1.0 / 6.0);
        assert_eq!(&r.occurrence_counts[..2], &[2, 1]);
    }

    #[test]
    fn coverage_rejects_foreign_sets() {
        let g = fam(Family::Path { n: 3 });
        let big = fam(Family::Path { n: 6 });
        let set = sample_set(&big, SampleKind::Searches, 1, SampleParams::for_graph(&big), 0).unwrap();
        assert!(coverage_report(&g, &set).is_err());
    }

    #[test]
    fn escape_sets() {
        let tri = fam(Family::Cycle { n: 3 });
        let s = escape_set(&tri, (0, 1), 0).unwrap();
        assert_eq!((s.members.clone(), s.tau), (vec![2], 1));

        let tree = fam(Family::RandomTree { n: 9 });
        for e in tree.edges() {
            assert_eq!(escape_set(&tree, e, e.0).unwrap().tau, 0);
            assert_eq!(escape_set(&tree, e, e.1).unwrap().tau, 0);
        }

        let c6 = fam(Family::Cycle { n: 6 });
        for e in c6.edges() {
            assert_eq!(escape_set(&c6, e, e.0).unwrap().tau, 1);
            assert_eq!(escape_set(&c6, e, e.1).unwrap().tau, 1);
        }

        assert!(escape_set(&c6, (0, 3), 0).is_err());
        assert!(escape_set(&c6, (0, 1), 4).is_err());
    }

    #[test]
    fn inclusion_triangle_exact() {
        let tri = fam(Family::Cycle { n: 3 });
        for e in tri.edges() {
            let r = edge_inclusion_prob(&tri, e, InclusionMode::Exact { budget: DEFAULT_ENUMERATION_BUDGET }).unwrap();
            assert_eq!(r.exact, Some(q(2, 3)));
            assert_eq!(r.tau_bound, q(1, 2));
            assert_eq!(r.dmax_bound, q(1, 2));
            assert!(r.bounds_hold);
        }
    }

    #[test]
    fn inclusion_path_is_certain() {
        let p3 = fam(Family::Path { n: 3 });
        for e in p3.edges() {
            let r = edge_inclusion_prob(&p3, e, InclusionMode::Exact { budget: 100 }).unwrap();
            assert_eq!(r.exact, Some(q(1, 1)));
            assert_eq!(r.tau_bound, q(1, 1));
            assert_eq!(r.dmax_bound, q(1, 2));
        }
    }

    #[test]
    fn inclusion_c6_monte_carlo() {
        let c6 = fam(Family::Cycle { n: 6 });
        let exact = exact_inclusion_all(&c6, DEFAULT_ENUMERATION_BUDGET).unwrap();
        // Each tree drops one edge; by rotation symmetry each edge is
        // dropped with probability 1/6.
        assert!(exact.values().all(|p| *p == q(5, 6)));
        let r = edge_inclusion_prob(&c6, (2, 3), InclusionMode::MonteCarlo { trials: 100_000, seed: 1 }).unwrap();
        assert!((r.estimate - 5.0 / 6.0).abs() < 0.01, "{}", r.estimate);
        assert!(r.bounds_hold);
    }

    #[test]
    fn bound_examples() {
        let a = sample_bound_m(&BoundQuery { c: 1.0, n: 30, d_max: 3, delta: 0.05 }).unwrap();
        assert_eq!(a.m_required, 16);
        let b = sample_bound_m(&BoundQuery { c: 1.0, n: 7, d_max: 3, delta: 0.01 }).unwrap();
        assert_eq!(b.m_required, 17);
        let d = sample_bound_m(&BoundQuery { c: 0.5, n: 2, d_max: 1, delta: 0.1 }).unwrap();
        assert!(d.degenerate);
        assert_eq!(d.m_required, 1);
        assert!(sample_bound_m(&BoundQuery { c: 1.0, n: 7, d_max: 3, delta: 1.0 }).is_err());
        assert!(sample_bound_m(&BoundQuery { c: 0.1, n: 5, d_max: 3, delta: 0.5 }).is_err());
        let near_one = sample_bound_m(&BoundQuery { c: 1.0, n: 1, d_max: 3, delta: 0.999 }).unwrap();
        assert_eq!(near_one.m_required, 1);
    }

    #[test]
    fn full_coverage_extremes() {
        let tree = fam(Family::RandomTree { n: 15 });
        assert_eq!(full_coverage_probability(&tree, 1, 200, 0).unwrap(), 1.0);
        let c6 = fam(Family::Cycle { n: 6 });
        assert_eq!(full_coverage_probability(&c6, 1, 200, 0).unwrap(), 0.0);
    }

    #[test]
    fn bound_holds_on_hex_chain() {
        let g = fam(Family::HexChain { k: 3 });
        let q = BoundQuery { c: 1.0, n: g.node_count(), d_max: 3, delta: 0.1 };
        let m = sample_bound_m(&q).unwrap().m_required;
        let p = full_coverage_probability(&g, m, 2000, 5).unwrap();
        let se = (0.1f64 * 0.9 / 2000.0).sqrt();
        assert!(1.0 - p <= 0.1 + 2.0 * se, "success {p}");
    }

    #[test]
    fn cover_time_basics() {
        let k2 = fam(Family::Complete { n: 2 });
        let r = cover_time_estimate(&k2, WalkPolicy::Uniform, CoverTarget::Node, 50, 100, 0).unwrap();
        assert_eq!((r.min, r.max, r.censored), (Some(1), Some(1), 0));

        let p3 = fam(Family::Path { n: 3 });
        let r = cover_time_estimate(&p3, WalkPolicy::Uniform, CoverTarget::Node, 500, 1000, 1).unwrap();
        assert!(r.min.unwrap() >= 2);

        let r = cover_time_estimate(&p3, WalkPolicy::Uniform, CoverTarget::Edge, 500, 1000, 1).unwrap();
        assert!(r.min.unwrap() >= 2);
    }

    #[test]
    fn cover_time_censoring_is_reported() {
        let g = fam(Family::Cycle { n: 30 });
        let r = cover_time_estimate(&g, WalkPolicy::Uniform, CoverTarget::Node, 40, 10, 0).unwrap();
        assert_eq!(r.censored, 40);
        assert_eq!(r.mean, None);
    }

    #[test]
    fn cycle_cover_time_grows_superlinearly() {
        let means: Vec<f64> = [8, 16, 32]
            .iter()
            .map(|&n| {
                let g = fam(Family::Cycle { n });
                let cap = default_cover_cap(&g);
                cover_time_estimate(&g, WalkPolicy::Uniform, CoverTarget::Node, 2000, cap, 7)
                    .unwrap()
                    .mean
                    .unwrap()
            })
            .collect();
        assert!(means[1] / means[0] > 2.5, "{means:?}");
        assert!(means[2] / means[1] > 2.5, "{means:?}");
    }

    #[test]
    fn curve_search_nodes_always_covered() {
        let g = fam(Family::HexChain { k: 2 });
        let kinds = [CurveKind { kind: SampleKind::Searches, params: SampleParams::for_graph(&g) }];
        let rows = coverage_curve(&g, &kinds, &[1, 2, 4], 100, 3).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.node_frac_mean == 1.0));
    }

    #[test]
    fn curve_csv_format() {
        let g = fam(Family::Cycle { n: 6 });
        let kinds = [CurveKind { kind: SampleKind::Searches, params: SampleParams::for_graph(&g) }];
        let csv = curve_to_csv(&coverage_curve(&g, &kinds, &[1], 10, 3).unwrap());
        assert_eq!(csv, "kind,m,node_frac_mean,edge_frac_mean,trials,seed\nsearches,1,1.000000,0.833333,10,3\n");
    }

    #[test]
    fn report_json_uses_fraction_strings() {
        let tri = fam(Family::Cycle { n: 3 });
        let r = edge_inclusion_prob(&tri, (0, 1), InclusionMode::Exact { budget: 100 }).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["exact"], "2/3");
        let back: InclusionReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
