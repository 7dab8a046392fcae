//! `searchcov`: seeded command-line access to the sampling and refinement labs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde::Serialize;

use searchcov::coverage::{
    check_bound, coverage_curve, cover_time_estimate, curve_to_csv, default_cover_cap, sample_bound_m,
    BoundQuery, CoverTarget, CurveKind,
};
use searchcov::invariance::{
    invariance_exact, invariance_sampled, InvarianceVerdict, DEFAULT_BOOTSTRAP_REPS,
};
use searchcov::reconstruct::verify_reconstruction;
use searchcov::rng::LabRng;
use searchcov::samplers::DEFAULT_ENUMERATION_BUDGET;
use searchcov::wl::{distinguish, wl_refine, wwl_refine, Init, Refinement, Rounds, Test, DEFAULT_WALK_GUARD};
use searchcov::{
    bench, gen_family, sample_set, Error, Family, Graph, Permutation, SampleKind, SampleParams, SampleSet,
    WalkPolicy,
};

#[derive(Parser)]
#[command(name = "searchcov", version, about = "Random walks, random searches and color refinement on graphs")]
struct Cli {
    /// Worker threads for Monte-Carlo trials (outputs do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph family member as an edge list.
    Gen(GenArgs),
    /// Draw a set of walks or searches as JSON.
    Sample(SampleArgs),
    /// Mean node/edge coverage against the number of samples, as CSV.
    Coverage(CoverageArgs),
    /// Sample-size bound for full edge coverage by searches.
    Bound(BoundArgs),
    /// Walk cover-time estimate.
    Covertime(CovertimeArgs),
    /// 1-WL refinement, one line per round.
    Wl(RefineArgs),
    /// Walk-based refinement, one line per round.
    Wwl(RefineArgs),
    /// Joint refinement verdict for two graphs.
    Distinguish(DistinguishArgs),
    /// Check that DFS visit orders relabel with the graph.
    Invariance(InvarianceArgs),
    /// Recover edges from searches and adjacency encodings.
    Reconstruct(ReconstructArgs),
    /// Time per sample of walks against searches on cycles.
    Bench(BenchArgs),
}

#[derive(Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum FamilyName {
    Path,
    Cycle,
    Complete,
    Star,
    RandomTree,
    ErConnected,
    HexChain,
    Sparse,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    avg_deg: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    d_max: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Walks,
    Searches,
}

impl From<KindArg> for SampleKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Walks => SampleKind::Walks,
            KindArg::Searches => SampleKind::Searches,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum PolicyArg {
    Uniform,
    NonBacktracking,
    LocalRule,
}

impl From<PolicyArg> for WalkPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Uniform => WalkPolicy::Uniform,
            PolicyArg::NonBacktracking => WalkPolicy::NonBacktracking,
            PolicyArg::LocalRule => WalkPolicy::LocalRule,
        }
    }
}

#[derive(Args)]
struct WalkOpts {
    /// Walk length in steps; defaults to the node count.
    #[arg(long)]
    length: Option<usize>,
    #[arg(long, value_enum, default_value = "uniform")]
    policy: PolicyArg,
}

impl WalkOpts {
    fn params(&self, g: &Graph) -> SampleParams {
        SampleParams::walks(self.length.unwrap_or(g.node_count()), self.policy.into())
    }
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    m: usize,
    #[command(flatten)]
    walk: WalkOpts,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveKindArg {
    Walks,
    Searches,
    Both,
}

#[derive(Args)]
struct CoverageArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    kind: CurveKindArg,
    /// Comma-separated sample counts.
    #[arg(long, value_delimiter = ',', required = true)]
    m_list: Vec<usize>,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[command(flatten)]
    walk: WalkOpts,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BoundArgs {
    /// Take n, C and d_max from this graph instead of the flags.
    #[arg(long, conflicts_with_all = ["n", "c", "d_max"])]
    graph: Option<PathBuf>,
    #[arg(long, required_unless_present = "graph")]
    n: Option<usize>,
    /// Sparsity constant |E| / |V|.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, required_unless_present = "graph")]
    d_max: Option<usize>,
    #[arg(long)]
    delta: f64,
    /// With --graph, also estimate the full-coverage rate over this many trials.
    #[arg(long, requires_all = ["graph", "seed"])]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Node,
    Edge,
}

#[derive(Args)]
struct CovertimeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "uniform")]
    policy: PolicyArg,
    #[arg(long, value_enum, default_value = "node")]
    target: TargetArg,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Steps per trial before censoring; defaults to 50 n^2.
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct RefineArgs {
    /// One or more graphs refined jointly.
    #[arg(long, required = true)]
    graph: Vec<PathBuf>,
    /// Fixed number of rounds; refines until stable when omitted.
    #[arg(long)]
    rounds: Option<usize>,
    /// Maximum walk length (walk-based refinement only).
    #[arg(long, default_value_t = 2)]
    ell: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum TestArg {
    Wl,
    Wwl,
}

#[derive(Args)]
struct DistinguishArgs {
    #[arg(long)]
    g: PathBuf,
    #[arg(long)]
    h: PathBuf,
    #[arg(long, value_enum, default_value = "wl")]
    test: TestArg,
    #[arg(long, default_value_t = 2)]
    ell: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Args)]
struct InvarianceArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Seed of the random relabeling.
    #[arg(long)]
    perm_seed: u64,
    #[arg(long, default_value_t = 100_000)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_BOOTSTRAP_REPS)]
    reps: usize,
    /// Sampling seed; required in sampled mode.
    #[arg(long, required_if_eq("mode", "sampled"))]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Window size; defaults to n + 1.
    #[arg(long)]
    s: Option<usize>,
    /// Searches to draw.
    #[arg(long, conflicts_with = "samples", required_unless_present = "samples")]
    m: Option<usize>,
    /// Use a search set written by `sample` instead of drawing one.
    #[arg(long)]
    samples: Option<PathBuf>,
    #[arg(long, required_unless_present = "samples")]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 2000)]
    m: usize,
    #[arg(long, default_value_t = 30)]
    repeats: usize,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

type CliResult<T> = Result<T, String>;

fn lab<T>(r: searchcov::Result<T>) -> CliResult<T> {
    r.map_err(|e: Error| e.to_string())
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Graph::from_edge_list(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn graph_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn emit(output: &Output, text: &str) -> CliResult<()> {
    match &output.out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(output: &Output, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    text.push('\n');
    emit(output, &text)
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> CliResult<T> {
    v.ok_or_else(|| format!("--{flag} is required for family {family}"))
}

fn cmd_gen(a: &GenArgs) -> CliResult<()> {
    let fam = match a.family {
        FamilyName::Path => Family::Path { n: need(a.n, "n", "path")? },
        FamilyName::Cycle => Family::Cycle { n: need(a.n, "n", "cycle")? },
        FamilyName::Complete => Family::Complete { n: need(a.n, "n", "complete")? },
        FamilyName::Star => Family::Star { n: need(a.n, "n", "star")? },
        FamilyName::RandomTree => Family::RandomTree { n: need(a.n, "n", "random_tree")? },
        FamilyName::ErConnected => Family::ErConnected {
            n: need(a.n, "n", "er_connected")?,
            avg_deg: need(a.avg_deg, "avg-deg", "er_connected")?,
        },
        FamilyName::HexChain => Family::HexChain { k: need(a.k, "k", "hex_chain")? },
        FamilyName::Sparse => Family::Sparse {
            n: need(a.n, "n", "sparse")?,
            c: need(a.c, "c", "sparse")?,
            d_max: need(a.d_max, "d-max", "sparse")?,
        },
    };
    let random = matches!(a.family, FamilyName::RandomTree | FamilyName::ErConnected | FamilyName::Sparse);
    let seed = match (random, a.seed) {
        (true, None) => return Err(format!("--seed is required for family {}", fam.name())),
        (_, s) => s.unwrap_or(0),
    };
    let g = lab(gen_family(&fam, seed))?;
    emit(&a.output, &g.to_edge_list())
}

fn cmd_sample(a: &SampleArgs) -> CliResult<()> {
    let g = read_graph(&a.graph)?;
    let kind: SampleKind = a.kind.into();
    let params = match kind {
        SampleKind::Walks => a.walk.params(&g),
        SampleKind::Searches => SampleParams::for_graph(&g),
    };
    let set = lab(sample_set(&g, kind, a.m, params, a.seed))?;
    let mut text = set.to_json();
    text.push('\n');
    emit(&a.output, &text)
}

fn cmd_coverage(a: &CoverageArgs) -> CliResult<()> {
    let g = read_graph(&a.graph)?;
    let walks = CurveKind { kind: SampleKind::Walks, params: a.walk.params(&g) };
    let searches = CurveKind { kind: SampleKind::Searches, params: SampleParams::for_graph(&g) };
    let kinds = match a.kind {
        CurveKindArg::Walks => vec![walks],
        CurveKindArg::Searches => vec![searches],
        CurveKindArg::Both => vec![walks, searches],
    };
    let rows = lab(coverage_curve(&g, &kinds, &a.m_list, a.trials, a.seed))?;
    emit(&a.output, &curve_to_csv(&rows))
}

#[derive(Serialize)]
struct BoundOut {
    #[serde(flatten)]
    query: BoundQuery,
    m_required: usize,
    degenerate: bool,
}

fn cmd_bound(a: &BoundArgs) -> CliResult<()> {
    if let Some(path) = &a.graph {
        let g = read_graph(path)?;
        if let Some(trials) = a.trials {
            let check = lab(check_bound(&g, a.delta, trials, a.seed.expect("clap enforces --seed")))?;
            return emit_json(&a.output, &check);
        }
        let query = BoundQuery::from_graph(&g, a.delta);
        let ans = lab(sample_bound_m(&query))?;
        return emit_json(&a.output, &BoundOut { query, m_required: ans.m_required, degenerate: ans.degenerate });
    }
    let query = BoundQuery {
        c: a.c,
        n: a.n.expect("clap enforces --n"),
        d_max: a.d_max.expect("clap enforces --d-max"),
        delta: a.delta,
    };
    let ans = lab(sample_bound_m(&query))?;
    emit_json(&a.output, &BoundOut { query, m_required: ans.m_required, degenerate: ans.degenerate })
}

fn cmd_covertime(a: &CovertimeArgs) -> CliResult<()> {
    let g = read_graph(&a.graph)?;
    let target = match a.target {
        TargetArg::Node => CoverTarget::Node,
        TargetArg::Edge => CoverTarget::Edge,
    };
    let cap = a.cap.unwrap_or_else(|| default_cover_cap(&g));
    let report = lab(cover_time_estimate(&g, a.policy.into(), target, a.trials, cap, a.seed))?;
    emit_json(&a.output, &report)
}

fn format_rounds(run: &Refinement, names: &[String]) -> String {
    let mut out = String::new();
    for t in 0..=run.last_round() {
        for (gi, name) in names.iter().enumerate() {
            out.push_str(&format!("round {t} {name}: {}\n", run.partition(t, gi)));
        }
    }
    match run.stable_round {
        Some(t) => out.push_str(&format!("stable at round {t}\n")),
        None => out.push_str("not stable\n"),
    }
    out
}

fn cmd_refine(a: &RefineArgs, walks: bool) -> CliResult<()> {
    let gs = a.graph.iter().map(|p| read_graph(p)).collect::<CliResult<Vec<_>>>()?;
    let names: Vec<String> = a.graph.iter().map(|p| graph_name(p)).collect();
    let rounds = a.rounds.map_or(Rounds::UntilStable, Rounds::Fixed);
    let run = if walks {
        lab(wwl_refine(&gs, a.ell, rounds, &Init::Uniform, DEFAULT_WALK_GUARD))?
    } else {
        wl_refine(&gs, rounds)
    };
    emit(&a.output, &format_rounds(&run, &names))
}

fn cmd_distinguish(a: &DistinguishArgs) -> CliResult<()> {
    let g = read_graph(&a.g)?;
    let h = read_graph(&a.h)?;
    let test = match a.test {
        TestArg::Wl => Test::Wl,
        TestArg::Wwl => Test::Wwl(a.ell),
    };
    emit_json(&a.output, &lab(distinguish(&g, &h, test))?)
}

fn cmd_invariance(a: &InvarianceArgs) -> CliResult<()> {
    let g = read_graph(&a.graph)?;
    let perm = Permutation::random(g.node_count(), &mut LabRng::seed_from_u64(a.perm_seed));
    let name = graph_name(&a.graph);
    let verdict = match a.mode {
        ModeArg::Exact => {
            let gap = lab(invariance_exact(&g, &perm, DEFAULT_ENUMERATION_BUDGET))?;
            InvarianceVerdict::exact(&name, a.perm_seed, &gap)
        }
        ModeArg::Sampled => {
            let seed = a.seed.expect("clap enforces --seed in sampled mode");
            let cmp = lab(invariance_sampled(&g, &perm, a.trials, a.reps, seed))?;
            InvarianceVerdict::sampled(&name, a.perm_seed, &cmp)
        }
    };
    emit_json(&a.output, &verdict)
}

fn cmd_reconstruct(a: &ReconstructArgs) -> CliResult<()> {
    let g = read_graph(&a.graph)?;
    let set = match &a.samples {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            serde_json::from_str::<SampleSet>(&text).map_err(|e| format!("{}: {e}", p.display()))?
        }
        None => lab(sample_set(
            &g,
            SampleKind::Searches,
            a.m.expect("clap enforces --m"),
            SampleParams::for_graph(&g),
            a.seed.expect("clap enforces --seed"),
        ))?,
    };
    let s = a.s.unwrap_or(g.node_count() + 1);
    let report = lab(verify_reconstruction(&g, &set, s))?;
    emit_json(&a.output, &report.summary())
}

fn cmd_bench(a: &BenchArgs) -> CliResult<()> {
    let rows = lab(bench::bench_cycles(&a.sizes, a.m, a.repeats, a.seed))?;
    emit(&a.output, &bench::bench_to_csv(&rows))
}

fn run(cli: Cli) -> CliResult<()> {
    match &cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Sample(a) => cmd_sample(a),
        Cmd::Coverage(a) => cmd_coverage(a),
        Cmd::Bound(a) => cmd_bound(a),
        Cmd::Covertime(a) => cmd_covertime(a),
        Cmd::Wl(a) => cmd_refine(a, false),
        Cmd::Wwl(a) => cmd_refine(a, true),
        Cmd::Distinguish(a) => cmd_distinguish(a),
        Cmd::Invariance(a) => cmd_invariance(a),
        Cmd::Reconstruct(a) => cmd_reconstruct(a),
        Cmd::Bench(a) => cmd_bench(a),
    }
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    let err = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{err}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string().trim_end(), 2),
    };
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            return fail("threads", &e.to_string(), 1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => fail("failed", &msg, 1),
    }
}
