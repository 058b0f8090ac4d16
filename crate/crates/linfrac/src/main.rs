//! Command-line front end: `analyze`, `orbit`, `quadric`, `verify`, `gen`.
//!
//! Exit codes: 0 success, 2 input/parse error, 3 singular system matrix,
//! 4 numerical or domain failure.

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use linfrac::construct::quadric_through_point;
use linfrac::dynamics::{iterate, residuals_along_orbit, OrbitStatus};
use linfrac::error::Error;
use linfrac::genlab::{generate, InstanceSpec};
use linfrac::geometry::{verify_invariance, InvarianceCheck, Quadric, QuadricJson};
use linfrac::homogeneous::{SystemInput, SystemMatrix};
use linfrac::output::to_json_string;
use linfrac::report::{analyze, AnalyzeOptions};
use linfrac::spectral::{decompose, Epsilon};
use linfrac::Tolerances;

#[derive(Parser)]
#[command(
    name = "linfrac",
    version,
    about = "Invariant quadrics and orbits of rational systems with shared denominator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral and congruence analysis: spectrum, similarity to eps*A^{-1},
    /// solution-space dimensions, invertible members, fixed points and
    /// invariant varieties.
    Analyze(AnalyzeArgs),
    /// Orbit trace from one or more initial points, as CSV (or JSON).
    Orbit(OrbitArgs),
    /// Invariant quadric (or affine-variety fallback) through a point.
    Quadric(QuadricArgs),
    /// Verify invariance of a quadric: fit mu in A^T M A = mu M.
    Verify(VerifyArgs),
    /// Generate a test system with known ground truth from a block spec.
    Gen(GenArgs),
}

#[derive(Args)]
struct ToleranceArgs {
    /// Forbidden-set tolerance (relative).
    #[arg(long = "tol-pr")]
    pr: Option<f64>,
    /// Singularity threshold (relative).
    #[arg(long = "tol-sing")]
    sing: Option<f64>,
    /// Determinant normalization tolerance.
    #[arg(long = "tol-det")]
    det: Option<f64>,
    /// Eigenvalue clustering radius (relative).
    #[arg(long = "tol-cluster")]
    cluster: Option<f64>,
    /// Nullspace threshold for the congruence operator (relative).
    #[arg(long = "tol-null")]
    null: Option<f64>,
    /// Membership tolerance on quadrics and varieties.
    #[arg(long = "tol-mem")]
    mem: Option<f64>,
    /// Unit-circle band half-width for eigenvalue pairing.
    #[arg(long = "tol-unit")]
    unit: Option<f64>,
    /// Eigenvalue pairing tolerance.
    #[arg(long = "tol-pair")]
    pair: Option<f64>,
    /// Periodicity detection tolerance.
    #[arg(long = "tol-per")]
    per: Option<f64>,
}

impl ToleranceArgs {
    fn build(&self) -> Result<Tolerances, Error> {
        let mut tol = Tolerances::default();
        for (field, value) in [
            (&mut tol.pr, self.pr),
            (&mut tol.sing, self.sing),
            (&mut tol.det, self.det),
            (&mut tol.cluster, self.cluster),
            (&mut tol.null, self.null),
            (&mut tol.mem, self.mem),
            (&mut tol.unit, self.unit),
            (&mut tol.pair, self.pair),
            (&mut tol.per, self.per),
        ] {
            if let Some(v) = value {
                if v <= 0.0 || v.is_nan() {
                    return Err(Error::DimensionMismatch(
                        "tolerances must be positive".into(),
                    ));
                }
                *field = v;
            }
        }
        Ok(tol)
    }
}

#[derive(Args)]
struct CommonArgs {
    /// System JSON file ({"n": .., "A": [[..]]} or {"A1", "B", "C", "d"}).
    #[arg(long, short = 'i')]
    input: PathBuf,
    /// Output file (stdout when omitted).
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    #[command(flatten)]
    tol: ToleranceArgs,
}

fn parse_epsilon(s: &str) -> Result<i8, String> {
    match s {
        "1" | "+1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err("epsilon must be +1 or -1".into()),
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Restrict to one sign (+1 or -1); both are reported when omitted.
    #[arg(long, value_parser = parse_epsilon, allow_hyphen_values = true)]
    epsilon: Option<i8>,
    /// Random-combination budget for the invertible-member search.
    #[arg(long, default_value_t = 64)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OrbitArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Initial point "x1,x2,...", repeatable.
    #[arg(long, required = true, allow_hyphen_values = true)]
    x0: Vec<String>,
    /// Maximum number of steps.
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Attach a quadric (JSON file) and emit its residual per step.
    #[arg(long)]
    quadric: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Worker threads for batches of initial points.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct QuadricArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Initial point "x1,x2,...", repeatable.
    #[arg(long, required = true, allow_hyphen_values = true)]
    x0: Vec<String>,
    /// Sign of the congruence equation; auto-detected (+1 then -1) when
    /// omitted.
    #[arg(long, value_parser = parse_epsilon, allow_hyphen_values = true)]
    epsilon: Option<i8>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for batches of initial points.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Quadric JSON file ({"M": [[..]]}).
    #[arg(long, short = 'm')]
    matrix: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    /// Instance spec JSON file.
    #[arg(long, short = 's')]
    spec: PathBuf,
    /// Output file (stdout when omitted).
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::Json(_) | Error::DimensionMismatch(_) | Error::InvalidSpec(_) => 2,
        Error::SingularMatrix { .. } => 3,
        _ => 4,
    }
}

fn load_system(path: &PathBuf, tol: Tolerances) -> Result<SystemMatrix, Error> {
    let text = std::fs::read_to_string(path)?;
    let input: SystemInput = serde_json::from_str(&text)?;
    input.into_system(tol)
}

fn parse_x0(s: &str, n: usize) -> Result<DVector<f64>, Error> {
    let values: Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let values = values.map_err(|e| Error::DimensionMismatch(format!("bad x0 component: {e}")))?;
    if values.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "x0 has {} components, system expects {}",
            values.len(),
            n
        )));
    }
    Ok(DVector::from_vec(values))
}

fn write_out(output: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

/// Auto-detection of the congruence sign: +1 first, then -1.
fn detect_epsilon(s: &SystemMatrix) -> Result<Epsilon, Error> {
    let sd = decompose(s)?;
    for eps in Epsilon::BOTH {
        if sd.check_inverse_similarity(eps)? {
            return Ok(eps);
        }
    }
    Err(Error::NotEpsilonSimilar { epsilon: 1.0 })
}

fn to_eps(v: i8) -> Epsilon {
    if v >= 0 {
        Epsilon::Plus
    } else {
        Epsilon::Minus
    }
}

#[derive(Serialize)]
struct OrbitJson {
    x0: Vec<f64>,
    status: String,
    points: Vec<Vec<f64>>,
    pr_scaled: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residuals: Option<Vec<f64>>,
}

fn status_text(status: &OrbitStatus) -> String {
    match status {
        OrbitStatus::CompleteUpTo(k) => format!("complete_up_to={k}"),
        OrbitStatus::Forbidden(k) => format!("forbidden_at={k}"),
        OrbitStatus::Periodic {
            period,
            detected_at,
        } => {
            format!("periodic period={period} detected_at={detected_at}")
        }
        OrbitStatus::FixedPoint(k) => format!("fixed_point detected_at={k}"),
    }
}

fn run_parallel<T, F>(inputs: Vec<T>, jobs: usize, f: F) -> Result<Vec<String>, Error>
where
    T: Send + Sync,
    F: Fn(&T) -> Result<String, Error> + Sync,
{
    if jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::NotApplicable(format!("thread pool: {e}")))?;
        pool.install(|| inputs.par_iter().map(&f).collect())
    } else {
        inputs.iter().map(&f).collect()
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), Error> {
    let tol = args.common.tol.build()?;
    let system = load_system(&args.common.input, tol)?;
    let options = AnalyzeOptions {
        epsilon: args.epsilon.map(to_eps),
        budget: args.budget,
        seed: args.seed,
        ..AnalyzeOptions::default()
    };
    let report = analyze(&system, &options)?;
    write_out(&args.common.output, &to_json_string(&report)?)
}

fn cmd_orbit(args: &OrbitArgs) -> Result<(), Error> {
    let tol = args.common.tol.build()?;
    let system = load_system(&args.common.input, tol)?.normalize();
    let quadric = match &args.quadric {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let qj: QuadricJson = serde_json::from_str(&text)?;
            Some(qj.into_quadric(&tol)?)
        }
        None => None,
    };
    let points: Result<Vec<DVector<f64>>, Error> =
        args.x0.iter().map(|s| parse_x0(s, system.n())).collect();
    let points = points?;
    let steps = args.steps.max(1);
    match args.format.as_str() {
        "csv" => {
            let blocks = run_parallel(points, args.jobs, |x0| {
                let orbit = iterate(&system, x0, steps);
                let mut buf = Vec::new();
                let coords: Vec<String> = x0.iter().map(|v| format!("{v:.16e}")).collect();
                writeln!(buf, "# x0: {}", coords.join(","))?;
                orbit.write_csv(&mut buf, quadric.as_ref())?;
                Ok(String::from_utf8(buf).expect("csv is utf-8"))
            })?;
            write_out(&args.common.output, &blocks.concat())
        }
        "json" => {
            let blocks = run_parallel(points, args.jobs, |x0| {
                let orbit = iterate(&system, x0, steps);
                let residuals = quadric
                    .as_ref()
                    .map(|q| residuals_along_orbit(&orbit, q).per_step);
                let record = OrbitJson {
                    x0: x0.iter().copied().collect(),
                    status: status_text(&orbit.status),
                    points: orbit
                        .points
                        .iter()
                        .map(|p| p.iter().copied().collect())
                        .collect(),
                    pr_scaled: orbit.trace.iter().map(|u| u[u.len() - 1]).collect(),
                    residuals,
                };
                to_json_string(&record)
            })?;
            write_out(&args.common.output, &blocks.concat())
        }
        other => Err(Error::DimensionMismatch(format!(
            "unknown format {other:?} (expected csv or json)"
        ))),
    }
}

fn cmd_quadric(args: &QuadricArgs) -> Result<(), Error> {
    let tol = args.common.tol.build()?;
    let system = load_system(&args.common.input, tol)?.normalize();
    let eps = match args.epsilon {
        Some(v) => to_eps(v),
        None => detect_epsilon(&system)?,
    };
    let seed = args.seed;
    let points: Result<Vec<DVector<f64>>, Error> =
        args.x0.iter().map(|s| parse_x0(s, system.n())).collect();
    let points = points?;
    let lines = run_parallel(points, args.jobs, |x0| {
        let set = quadric_through_point(&system, x0, eps, seed)?;
        to_json_string(&set.to_json(eps))
    })?;
    write_out(&args.common.output, &lines.concat())
}

#[derive(Serialize)]
struct VerifyReport {
    invariant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    converse_caveat: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
    signature: [usize; 3],
    degenerate: bool,
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Error> {
    let tol = args.common.tol.build()?;
    let system = load_system(&args.common.input, tol)?.normalize();
    let text = std::fs::read_to_string(&args.matrix)?;
    let qj: QuadricJson = serde_json::from_str(&text)?;
    let quadric: Quadric = qj.into_quadric(&tol)?;
    if quadric.order() != system.n() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "quadric has order {}, system expects {}",
            quadric.order(),
            system.n() + 1
        )));
    }
    let (p, q, z) = quadric.signature();
    let report = match verify_invariance(&quadric, &system) {
        InvarianceCheck::Invariant {
            mu,
            converse_caveat,
        } => VerifyReport {
            invariant: true,
            mu: Some(mu),
            converse_caveat: Some(converse_caveat),
            residual: None,
            signature: [p, q, z],
            degenerate: quadric.is_degenerate(),
        },
        InvarianceCheck::NotInvariant { residual } => VerifyReport {
            invariant: false,
            mu: None,
            converse_caveat: None,
            residual: Some(residual),
            signature: [p, q, z],
            degenerate: quadric.is_degenerate(),
        },
    };
    write_out(&args.common.output, &to_json_string(&report)?)
}

#[derive(Serialize)]
struct GenOutput {
    n: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    epsilon: i8,
    expected_sigma: Vec<SigmaOut>,
    expected_r: usize,
    expected_s: usize,
    expected_dim: usize,
}

#[derive(Serialize)]
struct SigmaOut {
    re: f64,
    im: f64,
    multiplicity: usize,
}

fn cmd_gen(args: &GenArgs) -> Result<(), Error> {
    let text = std::fs::read_to_string(&args.spec)?;
    let spec: InstanceSpec = serde_json::from_str(&text)?;
    let inst = generate(&spec)?;
    let out = GenOutput {
        n: spec.n,
        a: (0..inst.a.nrows())
            .map(|i| (0..inst.a.ncols()).map(|j| inst.a[(i, j)]).collect())
            .collect(),
        epsilon: spec.epsilon,
        expected_sigma: inst
            .expected_sigma
            .iter()
            .map(|&(v, m)| SigmaOut {
                re: v.re,
                im: v.im,
                multiplicity: m,
            })
            .collect(),
        expected_r: inst.expected_r,
        expected_s: inst.expected_s,
        expected_dim: inst.expected_dim,
    };
    write_out(&args.output, &to_json_string(&out)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Orbit(args) => cmd_orbit(args),
        Command::Quadric(args) => cmd_quadric(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Gen(args) => cmd_gen(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
