//! The `dense-streams` command line.
//!
//! Every run subcommand reads a [`StreamFile`] (`--input`) or generates an
//! instance (`--gen`), runs `--trials` seeded trials and prints one report row
//! per trial, followed by a summary. Trial `i` uses seed `seed + i`; with
//! `--gen` the instance is regenerated from that seed as well, so any row can
//! be reproduced alone with `--seed <row seed> --trials 1`.
//!
//! Exit codes: [`EXIT_OK`], [`EXIT_CONFIG`], [`EXIT_INPUT`], [`EXIT_CAP`].

mod report;
pub mod stream;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

pub use report::{RunRow, Summary, RUN_CSV_HEADER};
pub use stream::{Record, StreamFile};

use crate::error::{Error, Result};
use crate::f0::{F0Params, F0Sketch};
use crate::generators;
use crate::hardlab::{self, harness};
use crate::optimizers::{
    csp_brute, csp_dense, densest_brute, densest_dense, maxcut_brute, maxcut_dense, DenseRunConfig,
    OptResult, SamplerOverrides, Solution, Variant,
};
use crate::sampler::{ExpanderGraph, Update, WalkSample};
use crate::simrare::{RareWindow, SimF0, SimWindow};
use crate::universe::{CspInstance, Graph};

/// Environment variable read for the default `--seed`.
pub const SEED_ENV: &str = "DENSE_STREAMS_SEED";
pub const EXIT_OK: i32 = 0;
/// Bad flags or parameter values.
pub const EXIT_CONFIG: i32 = 2;
/// Malformed or unusable input records.
pub const EXIT_INPUT: i32 = 3;
/// An enumeration or representation cap was exceeded.
pub const EXIT_CAP: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter { .. } => EXIT_CONFIG,
        Error::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_INPUT,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dense-streams",
    version,
    about = "Streaming sketches for dense inputs"
)]
pub struct Cli {
    /// Base seed.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Record wall time per trial (reports are otherwise byte-identical).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dense Max-Cut.
    Maxcut(OptArgs),
    /// Densest subgraph.
    Densest(OptArgs),
    /// Dense Max-CSP.
    Csp(OptArgs),
    /// Jaccard similarity of the `a` and `b` sets.
    Similarity(SimArgs),
    /// Fraction of distinct elements with multiplicity exactly `k`.
    Rarity(RareArgs),
    /// Distinct-element count.
    F0(F0Args),
    /// Expander-walk subsample of an element stream.
    Sample(SampleArgs),
    /// Lower-bound instance experiments.
    Hardlab(HardlabArgs),
    /// Write a generated stream file.
    Gen(GenArgs),
}

/// Where the instance comes from, plus generator parameters.
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Stream file to read.
    #[arg(long, conflicts_with = "gen")]
    pub input: Option<PathBuf>,
    /// Generator kind: erdos-renyi, bip, planted-clique, grr, matching-union,
    /// csp-random, multiplicity-profile, distinct:N, jaccard.
    #[arg(long)]
    pub gen: Option<String>,
    /// Vertex or variable count; universe size for element streams. With
    /// `--input`, ids are then used as they are instead of being renumbered.
    #[arg(long)]
    pub n: Option<usize>,
    /// Degree (grr, matching-union), arity (csp) or rarity level.
    #[arg(long)]
    pub k: Option<usize>,
    /// CSP alphabet size.
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    /// Edge or scope probability.
    #[arg(long)]
    pub p: Option<f64>,
    /// Number of random constraints (csp-random); dense scopes when absent.
    #[arg(long)]
    pub m: Option<usize>,
    /// Side size of the complete bipartite graph (default n/2).
    #[arg(long)]
    pub s: Option<usize>,
    /// Planted clique size (default n/2).
    #[arg(long)]
    pub clique: Option<usize>,
    /// Distinct elements (multiplicity-profile).
    #[arg(long)]
    pub distinct: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub max_mult: u32,
    /// Mean number of extra copies per element (distinct:N).
    #[arg(long, default_value_t = 1.0)]
    pub dup: f64,
    /// Union size (jaccard).
    #[arg(long)]
    pub union: Option<usize>,
    /// Target Jaccard similarity (jaccard).
    #[arg(long, default_value_t = 0.4)]
    pub jaccard: f64,
}

#[derive(Debug, Clone, Args)]
pub struct TrialArgs {
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Compare every trial against the exact answer.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OptArgs {
    #[arg(long, default_value_t = 0.2)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.2)]
    pub alpha: f64,
    #[arg(long, default_value = "f0", value_parser = parse_variant)]
    pub variant: Variant,
    /// Sampler walk length (default: derived from eps and alpha).
    #[arg(long)]
    pub walk_len: Option<usize>,
    /// Sampler spectral target (default: derived from eps and alpha).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Walk over every expander vertex once (exact sampler estimates).
    #[arg(long)]
    pub exhaustive: bool,
    /// Write every per-solution estimate as CSV here.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[command(flatten)]
    pub trials: TrialArgs,
    #[command(flatten)]
    pub source: SourceArgs,
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMethod {
    /// Three distinct-count sketches.
    F0,
    /// Permutation-hash window.
    Perm,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    #[arg(long, default_value_t = 0.15)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.4)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = SimMethod::Perm)]
    pub method: SimMethod,
    /// Window over the whole padded universe.
    #[arg(long)]
    pub full_window: bool,
    #[command(flatten)]
    pub trials: TrialArgs,
    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RareArgs {
    #[arg(long, default_value_t = 0.15)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.4)]
    pub alpha: f64,
    #[arg(long)]
    pub full_window: bool,
    #[command(flatten)]
    pub trials: TrialArgs,
    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Debug, Clone, Args)]
pub struct F0Args {
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0 / 9.0)]
    pub delta: f64,
    #[command(flatten)]
    pub trials: TrialArgs,
    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 4000)]
    pub walk_len: usize,
    #[arg(long, default_value_t = 0.02)]
    pub lambda: f64,
    /// Accuracy target for the oracle check `|μ̂ - μ| ≤ ε + λ/α`.
    #[arg(long, default_value_t = 0.08)]
    pub eps: f64,
    /// Test function `f(i) = [i < threshold]` (default: half the universe).
    #[arg(long)]
    pub threshold: Option<u64>,
    #[arg(long)]
    pub exhaustive: bool,
    #[command(flatten)]
    pub trials: TrialArgs,
    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Copt,
    SharedGood,
    GadgetDet,
    CondToPlain,
    ValueGap,
    Rademacher,
    Hamming,
}

#[derive(Debug, Clone, Args)]
pub struct HardlabArgs {
    #[arg(value_enum)]
    pub experiment: Experiment,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Slack threshold (default `n √k / 2000`).
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Rademacher sum lengths.
    #[arg(long, value_delimiter = ',', default_value = "16,64,256")]
    pub lengths: Vec<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    /// Generator kind (see `--gen` on the run subcommands).
    pub kind: String,
    /// Output path (default: stdout).
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub source: SourceArgs,
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let ctx = Ctx {
        seed: cli.seed,
        timing: cli.timing,
    };
    let (name, rows) = match &cli.command {
        Command::Maxcut(a) => ("maxcut", run_opt(&ctx, Problem::MaxCut, a)?),
        Command::Densest(a) => ("densest", run_opt(&ctx, Problem::Densest, a)?),
        Command::Csp(a) => ("csp", run_opt(&ctx, Problem::Csp, a)?),
        Command::Similarity(a) => ("similarity", run_similarity(&ctx, a)?),
        Command::Rarity(a) => ("rarity", run_rarity(&ctx, a)?),
        Command::F0(a) => ("f0", run_f0(&ctx, a)?),
        Command::Sample(a) => ("sample", run_sample(&ctx, a)?),
        Command::Hardlab(a) => return run_hardlab(&ctx, a, cli.format, out),
        Command::Gen(a) => return run_gen(&ctx, a, out),
    };
    let summary = Summary::of(name, &rows);
    match cli.format {
        Format::Json => {
            report::write_json_lines(&rows, out)?;
            report::write_summary_json(&summary, out)?;
        }
        Format::Csv => {
            report::write_csv(&rows, RUN_CSV_HEADER, out)?;
            writeln!(err, "{}", report::summary_text(&summary))?;
        }
    }
    Ok(())
}

struct Ctx {
    seed: u64,
    timing: bool,
}

impl Ctx {
    fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }

    fn timed<T>(&self, f: impl FnOnce() -> T) -> (T, Option<f64>) {
        if self.timing {
            let start = Instant::now();
            let v = f();
            (v, Some(start.elapsed().as_secs_f64() * 1e3))
        } else {
            (f(), None)
        }
    }
}

/// Instance produced by a generator or read from a file.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Graph(Graph),
    Csp(CspInstance),
    /// Updates and universe size.
    Elements(Vec<(u64, bool)>, u64),
    /// Sets `A`, `B` and universe size.
    Sets(Vec<u64>, Vec<u64>, u64),
}

impl Instance {
    pub fn to_stream_file(&self) -> Result<StreamFile> {
        Ok(match self {
            Instance::Graph(g) => StreamFile::from_graph(g)?,
            Instance::Csp(phi) => StreamFile::from_csp(phi),
            Instance::Elements(updates, _) => StreamFile {
                records: updates
                    .iter()
                    .map(|&(x, ins)| {
                        if ins {
                            Record::Element(x)
                        } else {
                            Record::Delete(x)
                        }
                    })
                    .collect(),
            },
            Instance::Sets(a, b, _) => StreamFile::from_sets(a, b),
        })
    }
}

fn need<T>(v: Option<T>, name: &'static str) -> Result<T> {
    v.ok_or_else(|| Error::param(name, "required by this generator"))
}

/// Runs generator `kind` with the parameters in `src`.
pub fn generate(kind: &str, src: &SourceArgs, seed: u64) -> Result<Instance> {
    if let Some(count) = kind.strip_prefix("distinct:") {
        let d: usize = count
            .parse()
            .map_err(|_| Error::param("gen", format!("bad count in {kind:?}")))?;
        let universe = src.n.map_or(1 << 32, |n| n as u64);
        let stream = generators::distinct_stream(d, universe, src.dup, seed)?;
        return Ok(Instance::Elements(
            stream.into_iter().map(|x| (x, true)).collect(),
            universe,
        ));
    }
    Ok(match kind {
        "erdos-renyi" => Instance::Graph(generators::erdos_renyi(
            need(src.n, "n")?,
            src.p.unwrap_or(0.5),
            seed,
        )?),
        "bip" => {
            let n = need(src.n, "n")?;
            let side = generators::prefix_side(n, src.s.unwrap_or(n / 2))?;
            Instance::Graph(hardlab::bip_instance(n, side)?)
        }
        "planted-clique" => {
            let n = need(src.n, "n")?;
            let (g, _) = generators::planted_clique(
                n,
                src.clique.unwrap_or(n / 2),
                src.p.unwrap_or(0.3),
                seed,
            )?;
            Instance::Graph(g)
        }
        "grr" => Instance::Graph(
            hardlab::grr_sample(need(src.n, "n")?, need(src.k, "k")?, seed)?.to_graph()?,
        ),
        "matching-union" => Instance::Graph(
            hardlab::matching_union_sample(need(src.n, "n")?, need(src.k, "k")?, seed)?
                .to_graph()?,
        ),
        "csp-random" => {
            let (n, k) = (need(src.n, "n")?, src.k.unwrap_or(2));
            Instance::Csp(match src.m {
                Some(m) => generators::csp_random(n, k, src.q, m, seed)?,
                None => generators::csp_dense_random(n, k, src.q, src.p.unwrap_or(0.5), seed)?,
            })
        }
        "multiplicity-profile" => {
            let universe = src.n.unwrap_or(10_007) as u64;
            let distinct = src.distinct.unwrap_or(4_500);
            let stream = generators::multiplicity_profile(universe, distinct, src.max_mult, seed)?;
            Instance::Elements(stream.into_iter().map(|x| (x, true)).collect(), universe)
        }
        "jaccard" => {
            let universe = src.n.unwrap_or(10_007) as u64;
            let (a, b) =
                generators::jaccard_pair(universe, src.union.unwrap_or(5_000), src.jaccard, seed)?;
            Instance::Sets(a, b, universe)
        }
        other => return Err(Error::param("gen", format!("unknown generator {other:?}"))),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Graph,
    Csp,
    Elements,
    Sets,
}

/// Instance of trial `trial`: the parsed file (shared) or a fresh generation.
fn load(src: &SourceArgs, shape: Shape, seed: u64) -> Result<Instance> {
    let inst = match (&src.input, &src.gen) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let file = StreamFile::parse(&text)?;
            match shape {
                Shape::Graph => Instance::Graph(file.to_graph(src.n)?),
                Shape::Csp => Instance::Csp(file.to_csp(src.n, src.k.unwrap_or(2), src.q)?),
                Shape::Elements => {
                    let (u, n) = file.to_elements(src.n.map(|n| n as u64))?;
                    Instance::Elements(u, n)
                }
                Shape::Sets => {
                    let (a, b, n) = file.to_sets(src.n.map(|n| n as u64))?;
                    Instance::Sets(a, b, n)
                }
            }
        }
        (None, Some(kind)) => generate(kind, src, seed)?,
        (None, None) => return Err(Error::param("input", "one of --input or --gen is required")),
    };
    let got = match &inst {
        Instance::Graph(_) => Shape::Graph,
        Instance::Csp(_) => Shape::Csp,
        Instance::Elements(..) => Shape::Elements,
        Instance::Sets(..) => Shape::Sets,
    };
    if got != shape {
        return Err(Error::param(
            "gen",
            format!("generator yields a {got:?} stream, expected {shape:?}"),
        ));
    }
    Ok(inst)
}

/// Loads once for `--input`, per trial for `--gen`.
fn instances(src: &SourceArgs, shape: Shape, ctx: &Ctx, trials: usize) -> Result<Vec<Instance>> {
    if trials == 0 {
        return Err(Error::param("trials", "must be at least 1"));
    }
    if src.input.is_some() {
        let inst = load(src, shape, ctx.seed)?;
        Ok(vec![inst; trials])
    } else {
        (0..trials)
            .map(|t| load(src, shape, ctx.trial_seed(t)))
            .collect()
    }
}

fn fmt_params(pairs: &[(&str, String)]) -> String {
    pairs
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Runs trials in parallel, mapping undefined estimates to a row warning.
fn run_trials<F>(ctx: &Ctx, instances: Vec<Instance>, f: F) -> Result<Vec<RunRow>>
where
    F: Fn(usize, u64, &Instance) -> Result<RunRow> + Sync,
{
    instances
        .par_iter()
        .enumerate()
        .map(|(t, inst)| {
            let seed = ctx.trial_seed(t);
            let (row, wall) = ctx.timed(|| f(t, seed, inst));
            row.map(|mut r| {
                r.wall_ms = wall;
                r
            })
        })
        .collect()
}

fn blank_row(
    command: &'static str,
    variant: String,
    seed: u64,
    trial: usize,
    params: String,
) -> RunRow {
    RunRow {
        command,
        variant,
        seed,
        trial,
        params,
        solution: String::new(),
        estimate: None,
        exact: None,
        optimum: None,
        success: None,
        error: None,
        warnings: String::new(),
        wall_ms: None,
    }
}

fn undefined_or<T>(r: Result<T>, row: &mut RunRow) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Undefined(msg)) => {
            row.warnings = format!("undefined: {msg}");
            if row.success.is_none() {
                row.success = Some(false);
            }
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Problem {
    MaxCut,
    Densest,
    Csp,
}

fn run_opt(ctx: &Ctx, problem: Problem, a: &OptArgs) -> Result<Vec<RunRow>> {
    let shape = if problem == Problem::Csp {
        Shape::Csp
    } else {
        Shape::Graph
    };
    let insts = instances(&a.source, shape, ctx, a.trials.trials)?;
    let command = match problem {
        Problem::MaxCut => "maxcut",
        Problem::Densest => "densest",
        Problem::Csp => "csp",
    };
    let overrides = SamplerOverrides {
        t: a.walk_len,
        lambda: a.lambda,
        exhaustive: a.exhaustive,
    };
    let tables = std::sync::Mutex::new(Vec::new());
    let rows = run_trials(ctx, insts, |t, seed, inst| {
        let mut cfg = DenseRunConfig::new(a.eps, a.alpha, seed)?
            .with_variant(a.variant)
            .with_sampler(overrides);
        if a.table.is_some() {
            cfg = cfg.with_table();
        }
        let (mut res, size) = match (problem, inst) {
            (Problem::MaxCut, Instance::Graph(g)) => {
                (maxcut_dense(g, &cfg)?, (g.n(), g.edges().len()))
            }
            (Problem::Densest, Instance::Graph(g)) => {
                (densest_dense(g, &cfg)?, (g.n(), g.edges().len()))
            }
            (Problem::Csp, Instance::Csp(phi)) => (
                csp_dense(phi, &cfg)?,
                (phi.shape().n, phi.constraints().len()),
            ),
            _ => unreachable!("shape checked on load"),
        };
        if a.trials.oracle {
            fill_oracle(&mut res, inst)?;
        }
        let mut params = vec![
            ("eps", a.eps.to_string()),
            ("alpha", a.alpha.to_string()),
            ("n", size.0.to_string()),
            ("m", size.1.to_string()),
        ];
        if let Instance::Csp(phi) = inst {
            params.push(("k", phi.shape().k.to_string()));
            params.push(("q", phi.shape().q.to_string()));
        }
        let mut row = blank_row(command, a.variant.to_string(), seed, t, fmt_params(&params));
        row.solution = res.solution.hex();
        row.estimate = Some(res.estimate);
        row.exact = res.exact;
        row.optimum = res.optimum;
        if let (Some(exact), Some(opt)) = (res.exact, res.optimum) {
            row.success = Some(exact >= (1.0 - a.eps) * opt - 1e-12);
            row.error = Some(if opt > 0.0 { 1.0 - exact / opt } else { 0.0 });
        }
        row.warnings = res.warnings.join(" | ");
        if let Some(table) = res.table.take() {
            tables.lock().expect("table lock").push((t, table));
        }
        Ok(row)
    })?;
    if let Some(path) = &a.table {
        let mut tables = tables.into_inner().expect("table lock");
        tables.sort_by_key(|(t, _)| *t);
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
        w.write_record(["trial", "index", "estimate"])
            .map_err(|e| Error::Io(e.to_string()))?;
        for (t, table) in tables {
            for q in table {
                w.write_record([
                    t.to_string(),
                    format!("{:#x}", q.index),
                    q.estimate.to_string(),
                ])
                .map_err(|e| Error::Io(e.to_string()))?;
            }
        }
        w.flush()?;
    }
    Ok(rows)
}

/// Fills the true objective of the returned solution and the brute-force optimum.
pub fn fill_oracle(res: &mut OptResult, inst: &Instance) -> Result<()> {
    match (&res.solution, inst) {
        (Solution::Cut(cut), Instance::Graph(g)) => {
            res.exact = Some(g.cut_value(*cut)?);
            res.optimum = Some(maxcut_brute(g)?.1);
        }
        (Solution::Subset { mask, .. }, Instance::Graph(g)) => {
            res.exact = Some(g.density(*mask));
            res.optimum = Some(densest_brute(g)?.1);
        }
        (Solution::Assignment { values, .. }, Instance::Csp(phi)) => {
            res.exact = Some(phi.value(values)?);
            res.optimum = Some(csp_brute(phi)?.1);
        }
        _ => {
            return Err(Error::InvalidInput(
                "solution does not match the instance".into(),
            ))
        }
    }
    Ok(())
}

fn run_similarity(ctx: &Ctx, a: &SimArgs) -> Result<Vec<RunRow>> {
    let insts = instances(&a.source, Shape::Sets, ctx, a.trials.trials)?;
    let variant = match (a.method, a.full_window) {
        (SimMethod::F0, _) => "f0",
        (SimMethod::Perm, false) => "perm",
        (SimMethod::Perm, true) => "perm-full",
    };
    run_trials(ctx, insts, |t, seed, inst| {
        let Instance::Sets(sa, sb, universe) = inst else {
            unreachable!("shape checked on load")
        };
        let mut params = vec![
            ("eps", a.eps.to_string()),
            ("alpha", a.alpha.to_string()),
            ("universe", universe.to_string()),
        ];
        let estimate = match a.method {
            SimMethod::F0 => {
                let mut sim = SimF0::new(*universe, a.eps, seed)?;
                for &w in sa {
                    sim.insert_a(w)?;
                }
                for &w in sb {
                    sim.insert_b(w)?;
                }
                sim.estimate()
            }
            SimMethod::Perm => {
                let mut sim = if a.full_window {
                    SimWindow::with_window(*universe, u64::MAX, seed)?
                } else {
                    SimWindow::new(*universe, a.eps, a.alpha, seed)?
                };
                for &w in sa {
                    sim.insert_a(w)?;
                }
                for &w in sb {
                    sim.insert_b(w)?;
                }
                params.push(("p", sim.modulus().to_string()));
                params.push(("t", sim.window().to_string()));
                let union = sa
                    .iter()
                    .chain(sb)
                    .collect::<std::collections::HashSet<_>>()
                    .len();
                params.push((
                    "effective_alpha",
                    (union as f64 / sim.modulus() as f64).to_string(),
                ));
                sim.estimate()
            }
        };
        let mut row = blank_row("similarity", variant.into(), seed, t, fmt_params(&params));
        let est = undefined_or(estimate, &mut row)?;
        row.estimate = est;
        if a.trials.oracle {
            row.exact = generators::exact_jaccard(sa, sb);
            if let (Some(e), Some(x)) = (est, row.exact) {
                row.error = Some((e - x).abs());
                row.success = Some((e - x).abs() <= a.eps);
            }
        }
        Ok(row)
    })
}

fn rarity_k(src: &SourceArgs) -> Result<u32> {
    let k = src.k.unwrap_or(3);
    u32::try_from(k).map_err(|_| Error::param("k", format!("{k} is too large")))
}

fn run_rarity(ctx: &Ctx, a: &RareArgs) -> Result<Vec<RunRow>> {
    let insts = instances(&a.source, Shape::Elements, ctx, a.trials.trials)?;
    let k = rarity_k(&a.source)?;
    let variant = if a.full_window { "perm-full" } else { "perm" };
    run_trials(ctx, insts, |t, seed, inst| {
        let Instance::Elements(updates, universe) = inst else {
            unreachable!("shape checked on load")
        };
        let mut rare = if a.full_window {
            RareWindow::with_window(*universe, k, u64::MAX, seed)?
        } else {
            RareWindow::new(*universe, k, a.eps, a.alpha, seed)?
        };
        let mut stream = Vec::with_capacity(updates.len());
        for &(w, insert) in updates {
            if !insert {
                return Err(Error::InvalidInput(
                    "rarity streams are insertion-only".into(),
                ));
            }
            rare.insert(w)?;
            stream.push(w);
        }
        let params = vec![
            ("eps", a.eps.to_string()),
            ("alpha", a.alpha.to_string()),
            ("k", k.to_string()),
            ("universe", universe.to_string()),
            ("p", rare.modulus().to_string()),
            ("t", rare.window().to_string()),
        ];
        let mut row = blank_row("rarity", variant.into(), seed, t, fmt_params(&params));
        let est = undefined_or(rare.estimate(), &mut row)?;
        row.estimate = est;
        if a.trials.oracle {
            row.exact = generators::exact_rarity(&stream, k);
            if let (Some(e), Some(x)) = (est, row.exact) {
                row.error = Some((e - x).abs());
                row.success = Some((e - x).abs() <= a.eps);
            }
        }
        Ok(row)
    })
}

fn run_f0(ctx: &Ctx, a: &F0Args) -> Result<Vec<RunRow>> {
    let insts = instances(&a.source, Shape::Elements, ctx, a.trials.trials)?;
    run_trials(ctx, insts, |t, seed, inst| {
        let Instance::Elements(updates, universe) = inst else {
            unreachable!("shape checked on load")
        };
        let params = F0Params::new(a.eps, a.delta, *universe)?;
        let mut sketch = F0Sketch::new(params, seed);
        for &(w, insert) in updates {
            if !insert {
                return Err(Error::InvalidInput(
                    "distinct-count streams are insertion-only".into(),
                ));
            }
            sketch.insert(w)?;
        }
        let p = [
            ("eps", a.eps.to_string()),
            ("delta", a.delta.to_string()),
            ("universe", universe.to_string()),
            ("capacity", params.capacity().to_string()),
            ("repetitions", params.repetitions().to_string()),
        ];
        let mut row = blank_row("f0", "kmv".into(), seed, t, fmt_params(&p));
        let est = sketch.estimate();
        row.estimate = Some(est);
        if a.trials.oracle {
            let truth = updates
                .iter()
                .map(|u| u.0)
                .collect::<std::collections::HashSet<_>>()
                .len() as f64;
            row.exact = Some(truth);
            let rel = if truth > 0.0 {
                (est - truth).abs() / truth
            } else {
                est.abs()
            };
            row.error = Some(rel);
            row.success = Some(rel <= a.eps);
        }
        Ok(row)
    })
}

fn run_sample(ctx: &Ctx, a: &SampleArgs) -> Result<Vec<RunRow>> {
    let insts = instances(&a.source, Shape::Elements, ctx, a.trials.trials)?;
    run_trials(ctx, insts, |t, seed, inst| {
        let Instance::Elements(updates, universe) = inst else {
            unreachable!("shape checked on load")
        };
        let graph = ExpanderGraph::build(*universe, a.lambda)?;
        let mut walk = if a.exhaustive {
            WalkSample::exhaustive(graph)
        } else {
            WalkSample::new(graph, a.walk_len, seed)?
        };
        for &(w, insert) in updates {
            walk.push(if insert {
                Update::insert(w)
            } else {
                Update::delete(w)
            })?;
        }
        let sigma = walk.finish()?;
        let threshold = a.threshold.unwrap_or(universe / 2);
        let f = |i: u64| f64::from(u8::from(i < threshold));
        let net: i64 = updates
            .iter()
            .map(|&(_, ins)| if ins { 1 } else { -1 })
            .sum();
        let alpha = net as f64 / *universe as f64;
        let p = [
            ("universe", universe.to_string()),
            ("walk_len", sigma.walk_len().to_string()),
            ("lambda", a.lambda.to_string()),
            ("eps", a.eps.to_string()),
            ("threshold", threshold.to_string()),
            ("alpha", alpha.to_string()),
        ];
        let variant = if a.exhaustive { "exhaustive" } else { "walk" };
        let mut row = blank_row("sample", variant.into(), seed, t, fmt_params(&p));
        row.solution = format!(
            "sigma_size={} sigma_distinct={}",
            sigma.size(),
            sigma.copies().len()
        );
        let est = undefined_or(sigma.estimate(f), &mut row)?;
        row.estimate = est;
        if a.trials.oracle && net > 0 {
            let mut counts = std::collections::HashMap::<u64, i64>::new();
            for &(w, ins) in updates {
                *counts.entry(w).or_default() += if ins { 1 } else { -1 };
            }
            let truth = counts.iter().map(|(&w, &c)| c as f64 * f(w)).sum::<f64>() / net as f64;
            row.exact = Some(truth);
            if let Some(e) = est {
                let dev = (e - truth).abs();
                row.error = Some(dev);
                row.success = Some(dev <= a.eps + a.lambda / alpha);
            }
        }
        Ok(row)
    })
}

fn run_hardlab(ctx: &Ctx, a: &HardlabArgs, format: Format, out: &mut dyn Write) -> Result<()> {
    let seed = ctx.seed;
    let rows = match a.experiment {
        Experiment::Copt => harness::copt_experiment(a.n, a.k, a.trials, seed)?,
        Experiment::SharedGood => {
            let tau = a.tau.unwrap_or(a.n as f64 * (a.k as f64).sqrt() / 2000.0);
            harness::shared_good_experiment(a.n, a.k, tau, a.trials, seed)?
        }
        Experiment::GadgetDet => harness::gadget_det_experiment(a.n, a.k, a.trials, seed)?,
        Experiment::CondToPlain => harness::cond_to_plain_experiment(a.n, a.k, a.trials, seed)?,
        Experiment::ValueGap => harness::value_gap_rows(a.n, a.k, a.restarts, a.trials, seed)?,
        Experiment::Rademacher => harness::rademacher_rows(&a.lengths, a.samples, seed),
        Experiment::Hamming => harness::hamming_rows(a.n, a.delta, a.samples, seed)?,
    };
    match format {
        Format::Json => report::write_json_lines(&rows, out),
        Format::Csv => report::write_csv(&rows, harness::CSV_HEADER, out),
    }
}

fn run_gen(ctx: &Ctx, a: &GenArgs, out: &mut dyn Write) -> Result<()> {
    let text = generate(&a.kind, &a.source, ctx.seed)?
        .to_stream_file()?
        .to_text();
    match &a.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => out.write_all(text.as_bytes()).map_err(Error::from),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["dense-streams"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            call(&["maxcut", "--gen", "bip", "--n", "8", "--eps", "2"]).0,
            EXIT_CONFIG
        );
        assert_eq!(call(&["maxcut", "--gen", "bip", "--n", "30"]).0, EXIT_CAP);
        assert_eq!(call(&["maxcut", "--bogus"]).0, EXIT_CONFIG);
        assert_eq!(call(&["maxcut"]).0, EXIT_CONFIG);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn gen_bip_edge_count() {
        let (code, out, _) = call(&["gen", "bip", "--n", "8"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 16);
    }

    #[test]
    fn reports_are_reproducible() {
        let args = [
            "maxcut",
            "--gen",
            "erdos-renyi",
            "--n",
            "8",
            "--trials",
            "3",
            "--oracle",
            "--seed",
            "5",
        ];
        let a = call(&args);
        assert_eq!(a.0, 0, "{}", a.2);
        assert_eq!(a, call(&args));
        assert_eq!(a.1.lines().count(), 4);
    }
}
