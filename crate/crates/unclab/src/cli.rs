//! Command-line entry point: `deficit`, `project`, `verify`, `scan`,
//! `sharpness`, `debruijn`.
//!
//! Exit codes are a stable contract: 0 success, 1 invariant failure,
//! 2 usage or I/O error. Reports are byte-identical across runs with the
//! same configuration and seed; wall-clock timing goes to stderr only.
//! CSV output prints numbers with 17 significant digits; JSON uses the
//! shortest round-trip-safe representation.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use crate::deficit::compute_deficit;
use crate::error::{Error, Result};
use crate::exprdsl;
use crate::funcrep::{Descriptor, SampledFunction};
use crate::gaussfit::{project_with, ProjectConfig};
use crate::input::FunctionDoc;
use crate::spectral::{debruijn_bound_at, debruijn_check, fourier, HermiteSpectrum};
use crate::stabilitylab::{ratio_scan, sharpness_curve, Family, ScanSummary, StabilityRecord};
use crate::verify::{self, Check};

#[derive(Parser, Debug)]
#[command(
    name = "unclab",
    version,
    about = "Numerical laboratory for the Heisenberg uncertainty deficit",
    long_about = "Computes the Heisenberg deficit, projects onto the Gaussian \
extremal cone, verifies the library's invariant suite, and runs stability and \
sharpness scans.\n\nInline expressions use the grammar: numbers, x1..x3 (x \
aliases x1), r = |x|, operators + - * / ^ (right-associative, constant \
exponents), functions exp sin cos abs sqrt. Precedence: ^ over unary minus \
over * / over + -.\n\nUNCLAB_THREADS caps scan parallelism."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Deficit breakdown and scaling diagnostics of a function
    Deficit(DeficitArgs),
    /// Nearest-Gaussian projection with transversality residuals
    Project(ProjectArgs),
    /// Run the library's invariant suite
    Verify(VerifyArgs),
    /// Stability-ratio scan over a function family
    Scan(ScanArgs),
    /// Sharpness curve Q(lambda) for the no-improvement demonstration
    Sharpness(SharpnessArgs),
    /// Hermite-sum check and distance bound
    Debruijn(DebruijnArgs),
}

#[derive(Args, Debug, Clone)]
struct InputArgs {
    /// Path to a function document (JSON, see README for the schema)
    #[arg(long, value_name = "PATH", conflicts_with = "expr")]
    input: Option<PathBuf>,
    /// Inline expression, e.g. "(1+0.1*x^4)*exp(-x^2/2)"
    #[arg(long, value_name = "SRC")]
    expr: Option<String>,
    /// Dimension for --expr (1-3)
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Box half-width (or max radius) for --expr sampling
    #[arg(long = "L", default_value_t = 12.0)]
    half_width: f64,
    /// Points (per axis) for --expr sampling
    #[arg(long = "N", default_value_t = 2048)]
    points: usize,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
    format: String,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DeficitArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Tolerance used for the report's invariant lines
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Recompute the breakdown on the Fourier side and compare
    #[arg(long)]
    fourier_check: bool,
}

#[derive(Args, Debug)]
struct ProjectArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Golden-section relative width and zero-detection tolerance
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Width search range as LO:HI
    #[arg(long, value_name = "LO:HI", default_value = "1e-4:1e4")]
    alpha_range: String,
    /// Include the full (alpha, objective) search trace in the report
    #[arg(long)]
    trace: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    output: OutputArgs,
    /// Restrict to one or more module suites (repeatable)
    #[arg(long, value_name = "NAME")]
    suite: Vec<String>,
    /// Replace every threshold (measured values stay reported)
    #[arg(long, value_name = "T")]
    tolerance: Option<f64>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    output: OutputArgs,
    /// Family: odd | hermite | two-bump | random | radial | radial-shell
    #[arg(long, default_value = "hermite")]
    family: String,
    /// Dimension for the radial families
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Highest Hermite mode for the hermite/random families
    #[arg(long, default_value_t = 6)]
    modes: usize,
    /// Seed for the random family
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SharpnessArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Dilation grid as LO:HI (log-spaced)
    #[arg(long, value_name = "LO:HI", default_value = "4:64")]
    lambda_range: String,
    /// Number of lambda points
    #[arg(long, default_value_t = 9)]
    lambda_points: usize,
}

#[derive(Args, Debug)]
struct DebruijnArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Truncation order of the Hermite spectrum
    #[arg(long, default_value_t = 30)]
    modes: usize,
    /// Projection tolerance for the distance bound
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

/// Machine-readable command report.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub sections: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub wall_ms: u128,
}

impl Report {
    fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Parse arguments (including argv[0]) and run. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    let outcome = match cli.command {
        Command::Deficit(a) => cmd_deficit(a),
        Command::Project(a) => cmd_project(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Sharpness(a) => cmd_sharpness(a),
        Command::Debruijn(a) => cmd_debruijn(a),
    };
    match outcome {
        Ok(pass) => {
            eprintln!("unclab: completed in {} ms", started.elapsed().as_millis());
            if pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("unclab: error: {e}");
            2
        }
    }
}

fn load_function(input: &InputArgs) -> Result<SampledFunction> {
    if let Some(path) = &input.input {
        return FunctionDoc::from_path(path)?.into_function();
    }
    if let Some(src) = &input.expr {
        let expr = exprdsl::parse(src, input.dim)?;
        // a pure-radius expression samples best on the radial representation
        let target = if input.dim == 1 {
            Descriptor::Grid1D {
                half_width: input.half_width,
                point_count: input.points,
            }
        } else if uses_only_radius(&expr) {
            Descriptor::Radial {
                dimension: input.dim,
                max_radius: input.half_width,
                point_count: input.points,
            }
        } else {
            Descriptor::GridND {
                dimension: input.dim,
                half_width: input.half_width,
                point_count: input.points,
            }
        };
        return exprdsl::sample(&expr, &target);
    }
    Err(Error::InvalidConfig(
        "either --input PATH or --expr SRC is required".into(),
    ))
}

fn uses_only_radius(e: &exprdsl::Expr) -> bool {
    use exprdsl::ExprKind;
    match &e.kind {
        ExprKind::Var(_) => false,
        ExprKind::Literal(_) | ExprKind::Radius => true,
        ExprKind::Neg(a) | ExprKind::Call(_, a) => uses_only_radius(a),
        ExprKind::Add(a, b)
        | ExprKind::Sub(a, b)
        | ExprKind::Mul(a, b)
        | ExprKind::Div(a, b)
        | ExprKind::Pow(a, b) => uses_only_radius(a) && uses_only_radius(b),
    }
}

fn input_echo(input: &InputArgs) -> Value {
    json!({
        "input": input.input.as_ref().map(|p| p.display().to_string()),
        "expr": input.expr,
        "dim": input.dim,
        "half_width": input.half_width,
        "points": input.points,
    })
}

fn parse_range(text: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidConfig(format!(
            "expected LO:HI, got {text:?}"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad range bound {:?}", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad range bound {:?}", parts[1])))?;
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
        return Err(Error::InvalidConfig(format!(
            "range must satisfy 0 < LO < HI, got {text:?}"
        )));
    }
    Ok((lo, hi))
}

fn check_positive_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "tolerances must be positive, got {tol}"
        )))
    }
}

fn breakdown_section(b: &crate::deficit::DeficitBreakdown) -> Value {
    let normalized = if b.l2_sq > 0.0 {
        Some(b.deficit / (b.l2_sq * b.l2_sq))
    } else {
        None
    };
    json!({
        "dimension": b.dimension,
        "l2_sq": b.l2_sq,
        "grad_sq": b.grad_sq,
        "moment_sq": b.moment_sq,
        "deficit": b.deficit,
        "deficit_normalized": normalized,
        "lambda_grad": b.lambda_grad,
        "lambda_moment": b.lambda_moment,
        "delta_norm": b.delta_norm,
    })
}

fn cmd_deficit(args: DeficitArgs) -> Result<bool> {
    check_positive_tol(args.tol)?;
    let u = load_function(&args.input)?;
    if args.fourier_check && !u.raw().len().is_power_of_two() {
        return Err(Error::InvalidConfig(
            "the Fourier path needs a power-of-two point count".into(),
        ));
    }
    let b = compute_deficit(&u);
    let mut sections = BTreeMap::new();
    sections.insert("breakdown".to_string(), breakdown_section(&b));
    let mut checks = vec![
        Check {
            id: "identity".into(),
            suite: "deficit".into(),
            description: "breakdown recomputation agreement".into(),
            measured: b.identity_residual(),
            threshold: 1e-12,
            pass: b.identity_residual() <= 1e-12,
        },
        {
            let measured = -b.deficit / (1.0 + b.moment_sq * b.grad_sq);
            Check {
                id: "nonnegativity".into(),
                suite: "deficit".into(),
                description: "deficit >= -tol (1 + |xu|^2 |grad u|^2)".into(),
                measured,
                threshold: args.tol,
                pass: measured <= args.tol,
            }
        },
    ];
    if args.fourier_check {
        let pair = fourier(&u)?;
        let bh = compute_deficit(&pair.u_hat);
        let residual = (bh.deficit - b.deficit).abs() / (1.0 + b.deficit.abs());
        sections.insert(
            "fourier".to_string(),
            json!({
                "deficit_hat": bh.deficit,
                "symmetry_residual": residual,
                "convention": pair.convention,
            }),
        );
        checks.push(Check {
            id: "fourier-symmetry".into(),
            suite: "deficit".into(),
            description: "deficit agreement between u and its transform".into(),
            measured: residual,
            threshold: 1e-6,
            pass: residual <= 1e-6,
        });
    }
    let report = Report {
        command: "deficit".into(),
        config: json!({
            "input": input_echo(&args.input),
            "tol": args.tol,
            "fourier_check": args.fourier_check,
        }),
        sections,
        checks,
        wall_ms: 0,
    };
    emit(&report, &args.output)
}

fn cmd_project(args: ProjectArgs) -> Result<bool> {
    check_positive_tol(args.tol)?;
    let (alpha_min, alpha_max) = parse_range(&args.alpha_range)?;
    let u = load_function(&args.input)?;
    let config = ProjectConfig {
        alpha_min,
        alpha_max,
        grid_points: 200,
    };
    let p = project_with(&u, args.tol, &config)?;
    let b = compute_deficit(&u);
    let scale = 1.0 + b.delta_norm * b.delta_norm;
    let worst = p.r0.abs().max(p.r1.abs()).max(p.r2.abs()) / scale;
    let mut sections = BTreeMap::new();
    sections.insert(
        "projection".to_string(),
        json!({
            "gaussian": {
                "dimension": p.gaussian.dimension,
                "amplitude": p.gaussian.amplitude,
                "width": p.gaussian.width,
            },
            "distance_sq": p.distance_sq,
            "r0": p.r0,
            "r1": p.r1,
            "r2": p.r2,
            "is_zero": p.is_zero,
            "zero_threshold": p.zero_threshold,
            "trace_points": p.alpha_trace.len(),
        }),
    );
    if args.trace {
        sections.insert(
            "alpha_trace".to_string(),
            serde_json::to_value(&p.alpha_trace)?,
        );
    }
    let report = Report {
        command: "project".into(),
        config: json!({
            "input": input_echo(&args.input),
            "tol": args.tol,
            "alpha_range": [alpha_min, alpha_max],
            "trace": args.trace,
        }),
        sections,
        checks: vec![Check {
            id: "transversality".into(),
            suite: "gaussfit".into(),
            description: "orthogonality residuals at the converged projection".into(),
            measured: worst,
            threshold: 1e-6,
            pass: worst <= 1e-6,
        }],
        wall_ms: 0,
    };
    emit(&report, &args.output)
}

fn cmd_verify(args: VerifyArgs) -> Result<bool> {
    if let Some(t) = args.tolerance {
        check_positive_tol(t)?;
    }
    let suites = if args.suite.is_empty() {
        None
    } else {
        Some(args.suite.as_slice())
    };
    let checks = verify::run(suites, args.tolerance);
    let passed = checks.iter().filter(|c| c.pass).count();
    let mut sections = BTreeMap::new();
    sections.insert(
        "summary".to_string(),
        json!({
            "total": checks.len(),
            "passed": passed,
            "failed": checks.len() - passed,
        }),
    );
    let report = Report {
        command: "verify".into(),
        config: json!({
            "suite": args.suite,
            "tolerance": args.tolerance,
        }),
        sections,
        checks,
        wall_ms: 0,
    };
    for c in &report.checks {
        eprintln!(
            "{} {:>4} {:<42} measured {:.3e} threshold {:.3e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.id,
            c.description,
            c.measured,
            c.threshold
        );
    }
    emit(&report, &args.output)
}

fn scan_family(args: &ScanArgs) -> Result<Family> {
    Ok(match args.family.as_str() {
        "odd" | "odd-only" => Family::OddOnly {
            modes: (1..=args.modes).filter(|k| k % 2 == 1).collect(),
        },
        "hermite" | "hermite-perturbation" => Family::HermitePerturbation {
            modes: (2..=args.modes).collect(),
            epsilons: vec![0.05, 0.1, 0.2, 0.3, 0.4],
        },
        "two-bump" => Family::TwoBump {
            width: 4.0,
            amplitudes: (1.0, 1.0),
            separations: vec![0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0],
        },
        "random" | "random-hermite" => Family::RandomHermite {
            max_mode: args.modes,
            count: 20,
            seed: args.seed,
        },
        "radial" | "radial-perturbation" => Family::RadialPerturbation {
            dimension: args.dim,
            powers: vec![1, 2],
            epsilons: vec![0.1, 0.2, 0.3],
        },
        "radial-shell" => Family::RadialShell {
            dimension: args.dim,
            width: 4.0,
            separations: vec![1.0, 1.5, 2.0, 2.5],
        },
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown family {other:?} (expected odd | hermite | two-bump | random | radial | radial-shell)"
            )))
        }
    })
}

fn cmd_scan(args: ScanArgs) -> Result<bool> {
    let family = scan_family(&args)?;
    let (records, summary) = ratio_scan(&family)?;
    let max_residual = summary.max_decomp_residual;
    let checks = vec![
        Check {
            id: "ratio-floor".into(),
            suite: "stabilitylab".into(),
            description: "empirical stability ratio stays above 0.01".into(),
            measured: 0.01 - summary.min_ratio,
            threshold: 0.0,
            pass: summary.min_ratio >= 0.01,
        },
        Check {
            id: "decomposition".into(),
            suite: "stabilitylab".into(),
            description: "decomposition identity on every record".into(),
            measured: max_residual,
            threshold: 1e-6,
            pass: max_residual <= 1e-6,
        },
    ];
    let mut sections = BTreeMap::new();
    sections.insert("summary".to_string(), serde_json::to_value(&summary)?);
    sections.insert("records".to_string(), serde_json::to_value(&records)?);
    let report = Report {
        command: "scan".into(),
        config: json!({
            "family": args.family,
            "dim": args.dim,
            "modes": args.modes,
            "seed": args.seed,
        }),
        sections,
        checks,
        wall_ms: 0,
    };
    if args.output.format == "csv" {
        emit_scan_csv(&records, &summary, &report, &args.output)?;
        return Ok(report.all_pass());
    }
    emit(&report, &args.output)
}

fn cmd_sharpness(args: SharpnessArgs) -> Result<bool> {
    let (lo, hi) = parse_range(&args.lambda_range)?;
    if args.lambda_points < 2 {
        return Err(Error::InvalidConfig("need at least 2 lambda points".into()));
    }
    let u = load_function(&args.input)?.normalized()?;
    let m = args.lambda_points;
    let lambdas: Vec<f64> = (0..m)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (m - 1) as f64).exp())
        .collect();
    let curve = sharpness_curve(&u, &lambdas)?;
    let scaled: Vec<f64> = curve.points.iter().map(|(l, q)| q * l * l).collect();
    let band_max = scaled.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let band_min = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    let positive = curve.points.iter().all(|(_, q)| *q > 0.0);
    let checks = vec![
        Check {
            id: "positivity".into(),
            suite: "stabilitylab".into(),
            description: "Q(lambda) > 0 across the grid".into(),
            measured: if positive { 0.0 } else { 1.0 },
            threshold: 0.0,
            pass: positive,
        },
        Check {
            id: "equivariance".into(),
            suite: "stabilitylab".into(),
            description: "v*(dilated u) matches the dilated v*".into(),
            measured: curve.equivariance_l2,
            threshold: 1e-6,
            pass: curve.equivariance_l2 <= 1e-6,
        },
    ];
    let mut sections = BTreeMap::new();
    sections.insert("curve".to_string(), serde_json::to_value(&curve.points)?);
    sections.insert(
        "band".to_string(),
        json!({
            "q_lambda_sq_max": band_max,
            "q_lambda_sq_min": band_min,
            "band_factor": band_max / band_min,
        }),
    );
    let report = Report {
        command: "sharpness".into(),
        config: json!({
            "input": input_echo(&args.input),
            "lambda_range": [lo, hi],
            "lambda_points": args.lambda_points,
        }),
        sections,
        checks,
        wall_ms: 0,
    };
    if args.output.format == "csv" {
        let mut csv = String::from("lambda,q\n");
        for (l, q) in &curve.points {
            csv.push_str(&format!("{l:.16e},{q:.16e}\n"));
        }
        write_output(&csv, &args.output.out)?;
        return Ok(report.all_pass());
    }
    emit(&report, &args.output)
}

fn cmd_debruijn(args: DebruijnArgs) -> Result<bool> {
    check_positive_tol(args.tol)?;
    let u = load_function(&args.input)?.normalized()?;
    let spectrum = HermiteSpectrum::of(&u, args.modes)?;
    let d = debruijn_check(&spectrum)?;
    let p = crate::gaussfit::project(&u, args.tol)?;
    let bound = debruijn_bound_at(p.distance_sq.sqrt());
    let measured_product = (u.moment_sq() * u.grad_norm_sq()).sqrt();
    let pure = spectrum.residual <= 1e-12;
    let margin_threshold = if pure { 1e-10 } else { f64::INFINITY };
    let checks = vec![
        Check {
            id: "hermite-sum".into(),
            suite: "spectral".into(),
            description: if pure {
                "sum identity: margin = 0 on a pure spectrum".into()
            } else {
                "sum inequality: margin >= -1e-10 with truncation".into()
            },
            measured: if pure { d.margin.abs() } else { -d.margin },
            threshold: if pure { margin_threshold } else { 1e-10 },
            pass: if pure {
                d.margin.abs() <= 1e-10
            } else {
                d.margin >= -1e-10
            },
        },
        Check {
            id: "distance-bound".into(),
            suite: "spectral".into(),
            description: "measured uncertainty product beats the bound".into(),
            measured: bound - measured_product,
            threshold: 0.0,
            pass: bound <= measured_product,
        },
    ];
    let mut sections = BTreeMap::new();
    sections.insert(
        "debruijn".to_string(),
        json!({
            "lhs": d.lhs,
            "rhs": d.rhs,
            "margin": d.margin,
            "residual": spectrum.residual,
            "distance": p.distance_sq.sqrt(),
            "bound": bound,
            "measured_product": measured_product,
        }),
    );
    sections.insert(
        "spectrum".to_string(),
        serde_json::to_value(&spectrum.coefficients)?,
    );
    let report = Report {
        command: "debruijn".into(),
        config: json!({
            "input": input_echo(&args.input),
            "modes": args.modes,
            "tol": args.tol,
        }),
        sections,
        checks,
        wall_ms: 0,
    };
    emit(&report, &args.output)
}

fn emit(report: &Report, output: &OutputArgs) -> Result<bool> {
    let text = match output.format.as_str() {
        "json" => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s
        }
        "csv" => report_csv(report),
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown format {other:?}"
            )))
        }
    };
    write_output(&text, &output.out)?;
    Ok(report.all_pass())
}

/// Flat key,value rows; every CSV starts with a header row.
fn report_csv(report: &Report) -> String {
    let mut rows = String::from("key,value\n");
    rows.push_str(&format!("command,{}\n", report.command));
    for (name, section) in &report.sections {
        flatten_into(name, section, &mut rows);
    }
    for c in &report.checks {
        rows.push_str(&format!(
            "check.{}.measured,{:.16e}\n",
            c.id, c.measured
        ));
        rows.push_str(&format!(
            "check.{}.threshold,{:.16e}\n",
            c.id, c.threshold
        ));
        rows.push_str(&format!("check.{}.pass,{}\n", c.id, c.pass));
    }
    rows
}

fn flatten_into(prefix: &str, v: &Value, rows: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                flatten_into(&format!("{prefix}.{k}"), inner, rows);
            }
        }
        Value::Array(items) => {
            for (i, inner) in items.iter().enumerate() {
                flatten_into(&format!("{prefix}.{i}"), inner, rows);
            }
        }
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                rows.push_str(&format!("{prefix},{f:.16e}\n"));
            } else {
                rows.push_str(&format!("{prefix},{n}\n"));
            }
        }
        Value::Bool(b) => rows.push_str(&format!("{prefix},{b}\n")),
        Value::String(s) => rows.push_str(&format!("{prefix},{s}\n")),
        Value::Null => rows.push_str(&format!("{prefix},\n")),
    }
}

/// One row per record plus a sibling JSON summary.
fn emit_scan_csv(
    records: &[StabilityRecord],
    summary: &ScanSummary,
    report: &Report,
    output: &OutputArgs,
) -> Result<()> {
    let mut param_keys: Vec<String> = Vec::new();
    for r in records {
        for k in r.parameters.keys() {
            if !param_keys.contains(k) {
                param_keys.push(k.clone());
            }
        }
    }
    param_keys.sort();
    let mut csv = String::from("family");
    for k in &param_keys {
        csv.push_str(&format!(",{k}"));
    }
    csv.push_str(
        ",deficit,distance_sq,ratio,d2_at_vstar,chain_lower,chain_lower_paper_variant,d_hat,decomp_residual,vstar_l2,radial_mass,is_zero_projection\n",
    );
    for r in records {
        csv.push_str(&r.family);
        for k in &param_keys {
            match r.parameters.get(k) {
                Some(v) => csv.push_str(&format!(",{v:.16e}")),
                None => csv.push(','),
            }
        }
        csv.push_str(&format!(
            ",{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
            r.deficit,
            r.distance_sq,
            r.ratio,
            r.d2_at_vstar,
            r.chain_lower,
            r.chain_lower_paper_variant
                .map(|v| format!("{v:.16e}"))
                .unwrap_or_default(),
            r.d_hat,
            r.decomp_residual,
            r.vstar_l2,
            r.radial_mass,
            r.is_zero_projection,
        ));
    }
    write_output(&csv, &output.out)?;
    let mut summary_doc = serde_json::to_value(summary)?;
    if let Value::Object(map) = &mut summary_doc {
        map.insert("config".to_string(), report.config.clone());
        map.insert(
            "checks".to_string(),
            serde_json::to_value(&report.checks)?,
        );
    }
    let mut summary_text = serde_json::to_string_pretty(&summary_doc)?;
    summary_text.push('\n');
    match &output.out {
        Some(path) => {
            let summary_path = path.with_extension("summary.json");
            std::fs::write(summary_path, summary_text)?;
        }
        None => eprintln!("{summary_text}"),
    }
    Ok(())
}

fn write_output(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("1e-4:1e4").unwrap(), (1e-4, 1e4));
        assert!(parse_range("5").is_err());
        assert!(parse_range("2:1").is_err());
        assert!(parse_range("-1:4").is_err());
    }

    #[test]
    fn deficit_of_an_inline_gaussian_passes() {
        let code = run([
            "unclab", "deficit", "--expr", "exp(-x^2/2)", "--out", "/tmp/unclab-test-deficit.json",
        ]);
        assert_eq!(code, 0);
        let text = std::fs::read_to_string("/tmp/unclab-test-deficit.json").unwrap();
        let doc: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["command"], "deficit");
        assert!(doc["sections"]["breakdown"]["deficit"].as_f64().unwrap().abs() < 1e-8);
    }

    #[test]
    fn missing_file_exits_with_two() {
        let code = run(["unclab", "deficit", "--input", "/nonexistent/file.json"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn unknown_family_is_a_usage_error() {
        let code = run(["unclab", "scan", "--family", "bogus"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn radius_only_expressions_sample_radially() {
        let args = InputArgs {
            input: None,
            expr: Some("exp(-r^2)".into()),
            dim: 3,
            half_width: 10.0,
            points: 1024,
        };
        let u = load_function(&args).unwrap();
        assert!(matches!(u, SampledFunction::Radial { dimension: 3, .. }));
    }
}
