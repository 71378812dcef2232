//! Command-line surface: `decompose`, `split`, `solve`, `verify`, `gen`.
//!
//! Every subcommand is a pure function of its input files and flags and
//! emits a deterministic JSON (or plain-text) report on stdout. Errors go to
//! stderr as one JSON object; exit codes are 0 (success), 1 (numerical
//! failure or failed verification), 2 (usage or validation error).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::decomp;
use crate::error::{Error, Result};
use crate::io;
use crate::linalg::{self, operator_norm, ComplexMatrix, HermitianOperator};
use crate::solver::{self, IterationConfig, IterationVerdict};
use crate::splitting::{self, ProperSplitting, SplittingKind};
use crate::testgen;

#[derive(Parser)]
#[command(
    name = "splitlab",
    version,
    about = "Positive decompositions, proper splittings and iterative solving for Hermitian operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Positive orthogonal decomposition, polar and pseudo-polar factors,
    /// and the positivity characterizations of one Hermitian operator.
    Decompose(DecomposeArgs),
    /// Build a proper splitting T = U - V and analyze its convergence.
    Split(SplitArgs),
    /// Run the stationary iteration X -> U^+ V X + U^+ S for T X = S.
    Solve(SolveArgs),
    /// Run randomized property suites against the underlying theory.
    Verify(VerifyArgs),
    /// Generate a random Hermitian operator with prescribed spectrum.
    Gen(GenArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Emit the report as JSON (default).
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Emit the report as flat `key: value` text.
    #[arg(long)]
    text: bool,
}

impl OutputArgs {
    fn render<T: Serialize>(&self, report: &T) -> Result<String> {
        let value = serde_json::to_value(report)
            .map_err(|e| Error::NumericalFailure(format!("report serialization failed: {e}")))?;
        if self.text {
            let mut out = String::new();
            render_text(&value, "", &mut out);
            Ok(out)
        } else {
            serde_json::to_string_pretty(&value)
                .map_err(|e| Error::NumericalFailure(format!("report serialization failed: {e}")))
        }
    }
}

fn render_text(value: &serde_json::Value, prefix: &str, out: &mut String) {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_text(v, &key, out);
            }
        }
        serde_json::Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                render_text(v, &format!("{prefix}[{i}]"), out);
            }
        }
        other => {
            out.push_str(prefix);
            out.push_str(": ");
            out.push_str(&other.to_string());
            out.push('\n');
        }
    }
}

#[derive(Args)]
struct DecomposeArgs {
    /// Operator T as a CMX file.
    #[arg(short, long)]
    input: PathBuf,
    /// Relative eigenvalue-zero threshold for rank decisions.
    #[arg(long)]
    rank_rtol: Option<f64>,
    /// Ladder index n for the projection-gap criterion.
    #[arg(long, default_value_t = 2)]
    ladder_n: u32,
    /// Directory that receives the factor matrices (t1, t2, u_t, abs_t, a, w)
    /// as CMX files.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Polar,
    Mp,
    Projection,
    DpoA,
    DpoB,
    Scaled,
    Squared,
    SqrtPolar,
    Custom,
}

#[derive(Args)]
struct SplittingArgs {
    /// Operator T as a CMX file.
    #[arg(short, long)]
    input: PathBuf,
    /// Splitting construction.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Factor U as a CMX file (kinds `custom` and `squared`).
    #[arg(long)]
    u: Option<PathBuf>,
    /// Positive-part scale for the scaled DPO splitting.
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Negative-part scale for the scaled DPO splitting.
    #[arg(long, default_value_t = 2)]
    m: u32,
    /// Relative eigenvalue-zero threshold for rank decisions.
    #[arg(long)]
    rank_rtol: Option<f64>,
}

#[derive(Args)]
struct SplitArgs {
    #[command(flatten)]
    splitting: SplittingArgs,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    splitting: SplittingArgs,
    /// Right-hand side S as a CMX file.
    #[arg(long)]
    rhs: PathBuf,
    /// Relative residual tolerance on ||T X - S||.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Iteration budget.
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    /// Write the final iterate X to this CMX file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite id, or `all` for the whole registry.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Generated instances per suite.
    #[arg(long, default_value_t = 200)]
    trials: u32,
    /// Base seed of the deterministic trial streams.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GenArgs {
    /// Ambient dimension (2..=64).
    #[arg(long)]
    dim: usize,
    /// Numerical rank; defaults to dim.
    #[arg(long)]
    rank: Option<usize>,
    /// Number of negative eigenvalues.
    #[arg(long, default_value_t = 0)]
    n_negative: usize,
    /// Smallest nonzero eigenvalue magnitude.
    #[arg(long, default_value_t = 0.5)]
    lo: f64,
    /// Largest eigenvalue magnitude.
    #[arg(long, default_value_t = 2.0)]
    hi: f64,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Destination CMX file for the generated operator.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

/// Rank tolerance resolution order: flag, then `SPLITLAB_RANK_RTOL`, then
/// the dimension-scaled default.
fn resolve_rank_rtol(flag: Option<f64>, dim: usize) -> Result<f64> {
    if let Some(v) = flag {
        return Ok(v);
    }
    if let Ok(raw) = std::env::var("SPLITLAB_RANK_RTOL") {
        return raw.trim().parse::<f64>().map_err(|_| {
            Error::InvalidArgument(format!("SPLITLAB_RANK_RTOL is not a number: {raw:?}"))
        });
    }
    Ok(linalg::default_rank_rtol(dim))
}

fn load_hermitian(path: &PathBuf, rank_rtol: Option<f64>) -> Result<HermitianOperator> {
    let m = io::load_matrix(path)?;
    let rtol = resolve_rank_rtol(rank_rtol, m.nrows().max(1))?;
    HermitianOperator::with_rank_rtol(m, rtol)
}

fn build_splitting(args: &SplittingArgs) -> Result<ProperSplitting> {
    let need_u = || -> Result<ComplexMatrix> {
        let path = args.u.as_ref().ok_or_else(|| {
            Error::InvalidArgument("this splitting kind requires --u".into())
        })?;
        io::load_matrix(path)
    };
    match args.kind {
        KindArg::Custom => {
            let t = io::load_matrix(&args.input)?;
            let u = need_u()?;
            splitting::make_proper_splitting_with_kind(&t, &u, SplittingKind::Custom)
        }
        KindArg::Squared => {
            let t = load_hermitian(&args.input, args.rank_rtol)?;
            let u = need_u()?;
            splitting::squared_splitting(&t, &u)
        }
        kind => {
            let t = load_hermitian(&args.input, args.rank_rtol)?;
            match kind {
                KindArg::Polar => splitting::polar_splitting(&t),
                KindArg::Mp => splitting::mp_splitting(&t),
                KindArg::Projection => splitting::projection_splitting(&t),
                KindArg::DpoA => splitting::dpo_splitting_a(&t),
                KindArg::DpoB => splitting::dpo_splitting_b(&t),
                KindArg::Scaled => splitting::scaled_dpo_splitting(&t, args.n, args.m),
                KindArg::SqrtPolar => splitting::sqrt_polar_splitting(&t),
                KindArg::Custom | KindArg::Squared => unreachable!("handled above"),
            }
        }
    }
}

#[derive(Serialize)]
struct DecomposeReport {
    dim: usize,
    rank: usize,
    positive_rank: usize,
    negative_rank: usize,
    norm: f64,
    gamma: Option<f64>,
    is_positive: bool,
    c0: f64,
    orthogonal: bool,
    reflection_gap: f64,
    polar_gap: f64,
    projection_gap: f64,
    ladder_n: u32,
    ladder_equiv: bool,
    reconstruction_residual: f64,
    factors_written: Option<String>,
}

fn cmd_decompose(args: &DecomposeArgs) -> Result<String> {
    let t = load_hermitian(&args.input, args.rank_rtol)?;
    let sp = decomp::Spectral::of(&t)?;
    let d = decomp::positive_orthogonal_decomposition(&t)?;
    let polar = decomp::polar_decomposition(&t)?;
    let pseudo = decomp::pseudo_polar_from_decomposition(&t, &d)?;
    let reflection = decomp::positivity_via_pseudo_polar(&t, &pseudo)?;
    let polar_gap = decomp::positivity_via_polar_gap(&t)?;
    let ladder = decomp::positivity_ladder(&t, args.ladder_n)?;
    let recon = operator_norm(
        &(pseudo.positive_factor().matrix() * pseudo.reflection() - t.matrix()),
    );

    let factors_written = match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            io::save_matrix(dir.join("t1.cmx"), d.t1().matrix())?;
            io::save_matrix(dir.join("t2.cmx"), d.t2().matrix())?;
            io::save_matrix(dir.join("u_t.cmx"), polar.isometry())?;
            io::save_matrix(dir.join("abs_t.cmx"), polar.abs().matrix())?;
            io::save_matrix(dir.join("a.cmx"), pseudo.positive_factor().matrix())?;
            io::save_matrix(dir.join("w.cmx"), pseudo.reflection())?;
            Some(dir.display().to_string())
        }
        None => None,
    };

    args.output.render(&DecomposeReport {
        dim: t.dim(),
        rank: sp.rank(),
        positive_rank: sp.positive_rank(),
        negative_rank: sp.negative_rank(),
        norm: sp.norm(),
        gamma: sp.gamma(),
        is_positive: sp.is_positive(),
        c0: d.c0(),
        orthogonal: d.orthogonal(),
        reflection_gap: reflection.reflection_gap.unwrap_or(0.0),
        polar_gap: polar_gap.polar_gap.unwrap_or(0.0),
        projection_gap: ladder.projection_gap.unwrap_or(0.0),
        ladder_n: args.ladder_n,
        ladder_equiv: ladder.ladder_equiv.unwrap_or(true),
        reconstruction_residual: recon,
        factors_written,
    })
}

fn cmd_split(args: &SplitArgs) -> Result<String> {
    let sp = build_splitting(&args.splitting)?;
    let report = splitting::convergence_report(&sp)?;
    let rendered = args.output.render(&report)?;
    if let Some(path) = &args.out {
        std::fs::write(path, &rendered)?;
        return Ok(format!("report written to {}", path.display()));
    }
    Ok(rendered)
}

#[derive(Serialize)]
struct SolveReport {
    kind: String,
    rho: f64,
    verdict: IterationVerdict,
    steps: usize,
    final_residual: Option<f64>,
    final_step: Option<f64>,
    direct_gap: f64,
    residuals: Vec<f64>,
    step_norms: Vec<f64>,
    x_written: Option<String>,
}

fn cmd_solve(args: &SolveArgs) -> Result<String> {
    let sp = build_splitting(&args.splitting)?;
    let s = io::load_matrix(&args.rhs)?;
    let cfg = IterationConfig {
        max_iters: args.max_iters,
        residual_tol: args.tol,
        ..IterationConfig::default()
    };
    let (x, trace) = solver::iterate_solve(&sp, &s, &cfg)?;
    let direct = solver::direct_solution(sp.t(), &s)?;
    let direct_gap = operator_norm(&(&x - &direct));
    let rho = linalg::spectral_radius(&sp.iteration_matrix()?)?;

    let x_written = match &args.out {
        Some(path) => {
            io::save_matrix(path, &x)?;
            Some(path.display().to_string())
        }
        None => None,
    };
    let report = SolveReport {
        kind: sp.kind().label(),
        rho,
        verdict: trace.verdict,
        steps: trace.steps,
        final_residual: trace.residuals.last().copied(),
        final_step: trace.step_norms.last().copied(),
        direct_gap,
        residuals: trace.residuals,
        step_norms: trace.step_norms,
        x_written,
    };
    if report.verdict == IterationVerdict::Diverged {
        // Surfaced as a numerical failure at the process level.
        return Err(Error::Diverged(report.steps));
    }
    args.output.render(&report)
}

#[derive(Serialize)]
struct VerifyReport {
    seed: u64,
    trials: u32,
    suites: Vec<crate::testgen::PropertySuiteResult>,
    total_failures: u32,
}

fn cmd_verify(args: &VerifyArgs) -> Result<(String, bool)> {
    let ids: Vec<&str> = if args.suite == "all" {
        testgen::SUITE_IDS.to_vec()
    } else {
        vec![args.suite.as_str()]
    };
    let mut suites = Vec::with_capacity(ids.len());
    for id in ids {
        suites.push(testgen::run_suite(id, args.trials, args.seed)?);
    }
    let total_failures = suites.iter().map(|s| s.failures).sum();
    let report = VerifyReport {
        seed: args.seed,
        trials: args.trials,
        suites,
        total_failures,
    };
    let rendered = args.output.render(&report)?;
    if let Some(path) = &args.out {
        std::fs::write(path, &rendered)?;
        return Ok((format!("report written to {}", path.display()), total_failures == 0));
    }
    Ok((rendered, total_failures == 0))
}

#[derive(Serialize)]
struct GenReport {
    spec: testgen::RandomOperatorSpec,
    rank: usize,
    positive_rank: usize,
    negative_rank: usize,
    norm: f64,
    out: String,
}

fn cmd_gen(args: &GenArgs) -> Result<String> {
    let spec = testgen::RandomOperatorSpec {
        dim: args.dim,
        rank: args.rank.unwrap_or(args.dim),
        n_negative: args.n_negative,
        spectrum_range: (args.lo, args.hi),
        seed: args.seed,
    };
    let t = testgen::random_hermitian(&spec)?;
    let sp = decomp::Spectral::of(&t)?;
    io::save_matrix(&args.out, t.matrix())?;
    args.output.render(&GenReport {
        rank: sp.rank(),
        positive_rank: sp.positive_rank(),
        negative_rank: sp.negative_rank(),
        norm: sp.norm(),
        out: args.out.display().to_string(),
        spec,
    })
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: String,
}

fn report_error(err: &Error, stderr: &mut impl Write) -> i32 {
    let payload = ErrorReport {
        error: err.tag(),
        message: err.to_string(),
    };
    let _ = writeln!(
        stderr,
        "{}",
        serde_json::to_string(&payload).unwrap_or_else(|_| format!("{{\"error\":\"{}\"}}", err.tag()))
    );
    err.exit_code()
}

/// Runs the CLI on explicit arguments and streams; returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, anything else is a
            // usage error.
            return if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                2
            } else {
                let _ = write!(stdout, "{e}");
                0
            };
        }
    };
    let outcome: Result<(String, bool)> = match &cli.command {
        Command::Decompose(a) => cmd_decompose(a).map(|s| (s, true)),
        Command::Split(a) => cmd_split(a).map(|s| (s, true)),
        Command::Solve(a) => cmd_solve(a).map(|s| (s, true)),
        Command::Verify(a) => cmd_verify(a),
        Command::Gen(a) => cmd_gen(a).map(|s| (s, true)),
    };
    match outcome {
        Ok((rendered, clean)) => {
            let _ = writeln!(stdout, "{}", rendered.trim_end());
            if clean {
                0
            } else {
                // Verification counterexamples are numerical failures.
                1
            }
        }
        Err(e) => report_error(&e, stderr),
    }
}

/// Entry point used by the binary.
pub fn main_entry() -> i32 {
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    run(std::env::args_os(), &mut stdout, &mut stderr)
}
