//! Command-line front end for the `rooftop-core` grid toolkit.
//!
//! Subcommands: `transform`, `geodesic`, `obstacle`, `verify`,
//! `selftest`. Field inputs are either JSON files (any argument ending
//! in `.json`) or expressions sampled on an axis given as `min,max,n`.
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on
//! input errors.

pub mod format;
pub mod selftest;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rooftop_core::expr::{self, Bindings, Var};
use rooftop_core::geodesic::{
    fiberwise_lipschitz_check, geodesic_infconv, geodesic_rooftop, geodesic_semmes,
    joint_convexity_check, ma_residual, required_sigma_window, sandwich_bounds, GeodesicMethod,
    GeodesicSolution,
};
use rooftop_core::legendre::{
    convexify, legendre_classical, neg_legendre, neg_legendre_back, DualAxis,
};
use rooftop_core::obstacle::{
    solve_penalty, solve_psor, verify_c11, verify_cushion, verify_family_laplacian,
    verify_quadratic_growth, ObstacleSolution, RooftopObstacle, SolveError,
};
use rooftop_core::rooftop::{compose_check, sigma_concavity_check, RooftopFamily};
use rooftop_core::{Axis, ScalarField};

use format::{CheckJson, InputDigest, MetricJson, RunReport};

/// A failed invocation, split by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, unreadable files, malformed expressions: exit 2.
    Input(String),
    /// The computation ran but a check did not pass: exit 1.
    Verification(String),
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

/// An axis given on the command line as `min,max,n`.
#[derive(Debug, Clone, Copy)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl FromStr for AxisSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<AxisSpec, String> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(format!("expected min,max,n, got {s:?}"));
        }
        let min: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| format!("bad axis minimum {:?}", parts[0]))?;
        let max: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| format!("bad axis maximum {:?}", parts[1]))?;
        let n: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("bad node count {:?}", parts[2]))?;
        Ok(AxisSpec { min, max, n })
    }
}

impl AxisSpec {
    fn to_axis(self) -> Result<Axis, Failure> {
        Axis::new(self.min, self.max, self.n).map_err(input)
    }
}

#[derive(Parser)]
#[command(
    name = "rooftop",
    version,
    about = "Discrete convex envelopes, geodesics, and obstacle problems on grids"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a pointwise transform to a one-dimensional field.
    Transform(TransformArgs),
    /// Interpolate between two convex endpoints across the unit strip.
    Geodesic(GeodesicArgs),
    /// Solve the two-sheet obstacle problem and verify the solution.
    Obstacle(ObstacleArgs),
    /// Run a single named verifier on explicit inputs.
    Verify(VerifyArgs),
    /// Run the built-in fixture battery.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TransformOp {
    Legendre,
    NegLegendre,
    NegLegendreBack,
    Convexify,
}

impl TransformOp {
    fn name(self) -> &'static str {
        match self {
            TransformOp::Legendre => "legendre",
            TransformOp::NegLegendre => "neg-legendre",
            TransformOp::NegLegendreBack => "neg-legendre-back",
            TransformOp::Convexify => "convexify",
        }
    }
}

#[derive(Args)]
struct TransformArgs {
    /// Input field file (JSON).
    #[arg(long, conflicts_with = "expr")]
    input: Option<PathBuf>,
    /// Input expression in x, sampled on --axis.
    #[arg(long, allow_hyphen_values = true)]
    expr: Option<String>,
    /// Sampling axis for --expr: min,max,n.
    #[arg(long, allow_hyphen_values = true)]
    axis: Option<AxisSpec>,
    #[arg(long, value_enum)]
    op: TransformOp,
    /// Window of the transformed field for the conjugate ops: min,max,n.
    #[arg(long, allow_hyphen_values = true)]
    dual: Option<AxisSpec>,
    /// Output field file.
    #[arg(long)]
    output: PathBuf,
    /// Optional columnar plot file.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GeodesicMethodArg {
    Semmes,
    Infconv,
    Rooftop,
    All,
}

#[derive(Args)]
struct GeodesicArgs {
    /// Left endpoint: field file or expression in x.
    #[arg(long, allow_hyphen_values = true)]
    psi0: String,
    /// Right endpoint: field file or expression in x.
    #[arg(long, allow_hyphen_values = true)]
    psi1: String,
    /// Sampling axis for expression endpoints: min,max,n.
    #[arg(long, allow_hyphen_values = true)]
    axis: Option<AxisSpec>,
    #[arg(long, value_enum)]
    method: GeodesicMethodArg,
    /// Number of s-nodes across the unit strip.
    #[arg(long = "s-n", default_value_t = 33)]
    s_n: usize,
    /// Tilt window for the rooftop route: min,max,n. Defaults to the
    /// window required by the endpoints, with as many nodes as the
    /// x-axis.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<AxisSpec>,
    /// Output field file; with --method all this is the semmes field.
    #[arg(long)]
    output: PathBuf,
    /// Optional report file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Optional columnar plot of the s = 1/2 slice, one column per route.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Psor,
    Penalty,
}

#[derive(Args)]
struct ObstacleArgs {
    /// First sheet: field file or expression in x (and y with --axis2).
    #[arg(long, allow_hyphen_values = true)]
    b0: String,
    /// Second sheet: field file or expression.
    #[arg(long, allow_hyphen_values = true)]
    b1: String,
    /// Sampling axis for expression sheets: min,max,n.
    #[arg(long, allow_hyphen_values = true)]
    axis: Option<AxisSpec>,
    /// Second sampling axis for two-dimensional expression sheets.
    #[arg(long, allow_hyphen_values = true)]
    axis2: Option<AxisSpec>,
    #[arg(long, value_enum)]
    method: SolverArg,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long = "max-iter", default_value_t = 200_000)]
    max_iter: usize,
    /// Penalty strength for --method penalty.
    #[arg(long, default_value_t = 1e4)]
    beta: f64,
    /// Over-relaxation factor for --method psor.
    #[arg(long, default_value_t = 1.7)]
    omega: f64,
    /// Output field file for the solution.
    #[arg(long)]
    output: PathBuf,
    /// Report file.
    #[arg(long)]
    report: PathBuf,
    /// Comma-separated verifiers to run: cushion, quadratic, c11.
    #[arg(long)]
    verify: Option<String>,
    /// Contact dilation radius for the cushion verifier.
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Optional columnar plot of the solution and the obstacle.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    Compose,
    FamilyLaplacian,
    SigmaConcavity,
}

impl CheckArg {
    fn name(self) -> &'static str {
        match self {
            CheckArg::Compose => "compose",
            CheckArg::FamilyLaplacian => "family-laplacian",
            CheckArg::SigmaConcavity => "sigma-concavity",
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: CheckArg,
    /// Family member (repeatable): field file or expression.
    #[arg(long = "member", allow_hyphen_values = true)]
    members: Vec<String>,
    /// Sampling axis for expression inputs: min,max,n.
    #[arg(long, allow_hyphen_values = true)]
    axis: Option<AxisSpec>,
    /// Second sampling axis for two-dimensional expression inputs.
    #[arg(long, allow_hyphen_values = true)]
    axis2: Option<AxisSpec>,
    /// Laplacian cap for the family-laplacian check.
    #[arg(long, default_value_t = 2.0)]
    bound: f64,
    /// Left endpoint for the sigma-concavity check.
    #[arg(long, allow_hyphen_values = true)]
    psi0: Option<String>,
    /// Right endpoint for the sigma-concavity check.
    #[arg(long, allow_hyphen_values = true)]
    psi1: Option<String>,
    /// Tilt axis for the sigma-concavity check: min,max,n.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<AxisSpec>,
    /// Probe node for the sigma-concavity check; defaults to the middle.
    #[arg(long)]
    probe: Option<usize>,
    /// Optional report file.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Restrict the battery to the one-dimensional fixtures.
    #[arg(long)]
    quick: bool,
    /// Directory receiving the fixture fields and report.json.
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
    /// Directory with a previous --out-dir run to compare against.
    #[arg(long)]
    baseline: Option<PathBuf>,
}

/// Parses the process arguments, runs the requested subcommand, and
/// returns the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match cli.command {
        Command::Transform(a) => cmd_transform(&a),
        Command::Geodesic(a) => cmd_geodesic(&a, start),
        Command::Obstacle(a) => cmd_obstacle(&a, start),
        Command::Verify(a) => cmd_verify(&a, start),
        Command::Selftest(a) => {
            selftest::run_selftest(a.quick, a.out_dir.as_deref(), a.baseline.as_deref(), start)
        }
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

/// Resolves a `--flag` argument to a field: a path when it ends in
/// `.json`, otherwise an expression sampled on the given axes.
fn load_input(
    source: &str,
    flag: &str,
    axis: Option<AxisSpec>,
    axis2: Option<AxisSpec>,
) -> Result<(ScalarField, InputDigest), Failure> {
    if source.ends_with(".json") {
        let path = Path::new(source);
        let bytes = fs::read(path)
            .map_err(|e| Failure::Input(format!("cannot read field file {}: {e}", path.display())))?;
        let field = format::parse_field_bytes(&bytes, path).map_err(Failure::Input)?;
        let digest = InputDigest {
            label: format!("{flag} {source}"),
            sha256: format::sha256_hex(&bytes),
        };
        Ok((field, digest))
    } else {
        let parsed = expr::parse(source).map_err(|e| Failure::Input(format!("{flag}: {e}")))?;
        let spec = axis.ok_or_else(|| {
            Failure::Input(format!("{flag} is an expression, so --axis min,max,n is required"))
        })?;
        let a0 = spec.to_axis()?;
        let field = match axis2 {
            Some(s2) => expr::eval_on_grid(
                &parsed,
                &[a0, s2.to_axis()?],
                &[Var::X, Var::Y],
                &Bindings::default(),
            ),
            None => expr::eval_on_grid(&parsed, &[a0], &[Var::X], &Bindings::default()),
        }
        .map_err(|e| Failure::Input(format!("{flag}: {e}")))?;
        let digest = InputDigest {
            label: format!("{flag} {source}"),
            sha256: format::sha256_hex(source.as_bytes()),
        };
        Ok((field, digest))
    }
}

fn write_field(path: &Path, f: &ScalarField) -> Result<(), Failure> {
    format::write_field(path, f).map_err(Failure::Input)
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text.as_bytes())
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn plot_lines_1d(axis: Axis, cols: &[(&str, &ScalarField)]) -> String {
    let mut out = String::from("# x");
    for (name, _) in cols {
        let _ = write!(out, "  {name}");
    }
    out.push('\n');
    for i in 0..axis.len() {
        let _ = write!(out, "{}", axis.node(i));
        for (_, f) in cols {
            let _ = write!(out, "  {}", f.at(i));
        }
        out.push('\n');
    }
    out
}

fn plot_lines_2d(f: &ScalarField, axis_names: (&str, &str), name: &str) -> String {
    let (a0, a1) = (f.axes()[0], f.axes()[1]);
    let mut out = format!("# {}  {}  {}\n", axis_names.0, axis_names.1, name);
    for i in 0..a0.len() {
        for j in 0..a1.len() {
            let _ = writeln!(out, "{}  {}  {}", a0.node(i), a1.node(j), f.at2(i, j));
        }
        if i + 1 < a0.len() {
            out.push('\n');
        }
    }
    out
}

fn finish(
    report: RunReport,
    path: Option<&Path>,
    start: Instant,
    quiet: bool,
) -> Result<(), Failure> {
    let mut report = report;
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    if let Some(p) = path {
        report.write(p).map_err(Failure::Input)?;
    }
    if !quiet {
        for c in &report.checks {
            println!(
                "{}: {} ({})",
                c.name,
                if c.pass { "pass" } else { "FAIL" },
                c.status
            );
        }
    }
    if report.pass {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        Err(Failure::Verification(failed.join(", ")))
    }
}

fn cmd_transform(a: &TransformArgs) -> Result<(), Failure> {
    let source = match (&a.input, &a.expr) {
        (Some(p), None) => p.to_string_lossy().into_owned(),
        (None, Some(e)) => e.clone(),
        _ => {
            return Err(Failure::Input(String::from(
                "exactly one of --input and --expr is required",
            )))
        }
    };
    let (f, _) = load_input(&source, "--input/--expr", a.axis, None)?;
    let needs_dual = |op: TransformOp| -> Result<AxisSpec, Failure> {
        a.dual.ok_or_else(|| {
            Failure::Input(format!(
                "--op {} needs --dual min,max,n for the transformed window",
                op.name()
            ))
        })
    };
    let result = match a.op {
        TransformOp::Legendre => {
            let dual = DualAxis::new(needs_dual(a.op)?.to_axis()?);
            legendre_classical(&f, &dual)
        }
        TransformOp::NegLegendre => {
            let dual = DualAxis::new(needs_dual(a.op)?.to_axis()?);
            neg_legendre(&f, &dual)
        }
        TransformOp::NegLegendreBack => {
            let primal = needs_dual(a.op)?.to_axis()?;
            neg_legendre_back(&f, &primal)
        }
        TransformOp::Convexify => convexify(&f),
    }
    .map_err(input)?;
    write_field(&a.output, &result)?;
    if let Some(plot) = &a.plot {
        write_text(plot, &plot_lines_1d(result.axes()[0], &[(a.op.name(), &result)]))?;
    }
    Ok(())
}

fn solve_route(
    method: GeodesicMethod,
    psi0: &ScalarField,
    psi1: &ScalarField,
    s_axis: Axis,
    sigma_axis: Axis,
) -> Result<GeodesicSolution, Failure> {
    let solved = match method {
        GeodesicMethod::Semmes => geodesic_semmes(psi0, psi1, s_axis),
        GeodesicMethod::InfConv => geodesic_infconv(psi0, psi1, s_axis),
        GeodesicMethod::Rooftop => geodesic_rooftop(psi0, psi1, s_axis, sigma_axis),
    }
    .map_err(input)?;
    for w in &solved.warnings {
        eprintln!("warning: {w}");
    }
    Ok(solved)
}

fn route_checks(
    report: &mut RunReport,
    label: &str,
    psi0: &ScalarField,
    psi1: &ScalarField,
    g: &GeodesicSolution,
) -> Result<(), Failure> {
    let mut push = |r: rooftop_core::report::CheckReport| {
        let mut c = CheckJson::from_report(&r);
        c.name = format!("{label}:{}", c.name);
        report.push(c);
    };
    push(sandwich_bounds(psi0, psi1, g).map_err(input)?);
    push(fiberwise_lipschitz_check(g).map_err(input)?);
    push(joint_convexity_check(g).map_err(input)?);
    let residual = ma_residual(g).map_err(input)?;
    report.push(CheckJson {
        name: format!("{label}:ma-residual"),
        status: String::from("checked"),
        pass: true,
        worst_violation: 0.0,
        location: Vec::new(),
        metrics: vec![MetricJson {
            name: String::from("sup_residual"),
            value: residual.sup_norm(),
        }],
    });
    Ok(())
}

fn cmd_geodesic(a: &GeodesicArgs, start: Instant) -> Result<(), Failure> {
    let (psi0, d0) = load_input(&a.psi0, "--psi0", a.axis, None)?;
    let (psi1, d1) = load_input(&a.psi1, "--psi1", a.axis, None)?;
    let s_axis = Axis::new(0.0, 1.0, a.s_n).map_err(input)?;
    let sigma_axis = match a.sigma {
        Some(spec) => spec.to_axis()?,
        None => {
            let (lo, hi) = required_sigma_window(&psi0, &psi1).map_err(input)?;
            Axis::new(lo, hi, psi0.len()).map_err(input)?
        }
    };
    let methods = match a.method {
        GeodesicMethodArg::Semmes => vec![GeodesicMethod::Semmes],
        GeodesicMethodArg::Infconv => vec![GeodesicMethod::InfConv],
        GeodesicMethodArg::Rooftop => vec![GeodesicMethod::Rooftop],
        GeodesicMethodArg::All => vec![
            GeodesicMethod::Semmes,
            GeodesicMethod::InfConv,
            GeodesicMethod::Rooftop,
        ],
    };
    let mut report = RunReport::new(
        &format!("geodesic --method {} --s-n {}", methods_label(a.method), a.s_n),
        vec![d0, d1],
    );
    let mut solved: Vec<GeodesicSolution> = Vec::new();
    for m in &methods {
        let g = solve_route(*m, &psi0, &psi1, s_axis, sigma_axis)?;
        route_checks(&mut report, m.name(), &psi0, &psi1, &g)?;
        solved.push(g);
    }
    if solved.len() > 1 {
        let tol = 5.0 * (psi0.axes()[0].h() + sigma_axis.h());
        let mut worst = 0.0f64;
        let mut metrics = Vec::new();
        for i in 0..solved.len() {
            for j in i + 1..solved.len() {
                let d = rooftop_core::field::sup_distance(&solved[i].field, &solved[j].field)
                    .map_err(input)?;
                worst = worst.max(d);
                metrics.push(MetricJson {
                    name: format!(
                        "sup_{}_{}",
                        solved[i].method.name(),
                        solved[j].method.name()
                    ),
                    value: d,
                });
            }
        }
        metrics.push(MetricJson { name: String::from("tolerance"), value: tol });
        report.push(CheckJson {
            name: String::from("route-agreement"),
            status: String::from("checked"),
            pass: worst <= tol,
            worst_violation: worst,
            location: Vec::new(),
            metrics,
        });
    }
    write_field(&a.output, &solved[0].field)?;
    if let Some(plot) = &a.plot {
        let mid = (s_axis.len() - 1) / 2;
        let rows: Vec<ScalarField> = solved
            .iter()
            .map(|g| g.field.row(mid))
            .collect::<Result<_, _>>()
            .map_err(input)?;
        let cols: Vec<(&str, &ScalarField)> = solved
            .iter()
            .zip(rows.iter())
            .map(|(g, r)| (g.method.name(), r))
            .collect();
        write_text(plot, &plot_lines_1d(psi0.axes()[0], &cols))?;
    }
    finish(report, a.report.as_deref(), start, false)
}

fn methods_label(m: GeodesicMethodArg) -> &'static str {
    match m {
        GeodesicMethodArg::Semmes => "semmes",
        GeodesicMethodArg::Infconv => "infconv",
        GeodesicMethodArg::Rooftop => "rooftop",
        GeodesicMethodArg::All => "all",
    }
}

fn solve_check(sol: &ObstacleSolution) -> CheckJson {
    let metric = |name: &str, value: f64| MetricJson { name: name.to_string(), value };
    CheckJson {
        name: String::from("solve"),
        status: String::from("checked"),
        pass: true,
        worst_violation: sol.residual_complementarity,
        location: Vec::new(),
        metrics: vec![
            metric("iterations", sol.iterations as f64),
            metric("residual_complementarity", sol.residual_complementarity),
            metric("residual_subharmonic", sol.residual_subharmonic),
            metric("contact_fraction", sol.contact_fraction()),
            metric("tol", sol.tol),
        ],
    }
}

fn cmd_obstacle(a: &ObstacleArgs, start: Instant) -> Result<(), Failure> {
    let (b0, d0) = load_input(&a.b0, "--b0", a.axis, a.axis2)?;
    let (b1, d1) = load_input(&a.b1, "--b1", a.axis, a.axis2)?;
    let obs = RooftopObstacle::new(b0, b1).map_err(input)?;
    let sol = match a.method {
        SolverArg::Psor => solve_psor(&obs, a.tol, a.max_iter, a.omega),
        SolverArg::Penalty => solve_penalty(&obs, a.beta, a.tol, a.max_iter),
    }
    .map_err(|e| match e {
        SolveError::Invalid(err) => input(err),
        SolveError::Stalled { residual, iterations, .. } => Failure::Verification(format!(
            "solver stalled at residual {residual:e} after {iterations} iterations"
        )),
        SolveError::Diverged { .. } => {
            Failure::Verification(String::from("solver diverged"))
        }
    })?;
    let method = match a.method {
        SolverArg::Psor => format!("obstacle --method psor --tol {} --omega {}", a.tol, a.omega),
        SolverArg::Penalty => {
            format!("obstacle --method penalty --tol {} --beta {}", a.tol, a.beta)
        }
    };
    let mut report = RunReport::new(&method, vec![d0, d1]);
    report.push(solve_check(&sol));
    if let Some(list) = &a.verify {
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let r = match name {
                "cushion" => verify_cushion(&sol, &obs, a.delta),
                "quadratic" => verify_quadratic_growth(&sol, &obs),
                "c11" => verify_c11(&sol, &obs),
                other => {
                    return Err(Failure::Input(format!(
                        "unknown verifier {other:?}; --verify takes cushion, quadratic, c11"
                    )))
                }
            }
            .map_err(input)?;
            report.push_report(&r);
        }
    }
    write_field(&a.output, &sol.u)?;
    if let Some(plot) = &a.plot {
        let g = obs.min();
        let text = match sol.u.dim() {
            1 => plot_lines_1d(sol.u.axes()[0], &[("u", &sol.u), ("obstacle", &g)]),
            _ => plot_lines_2d(&sol.u, ("x", "y"), "u"),
        };
        write_text(plot, &text)?;
    }
    finish(report, Some(&a.report), start, false)
}

fn cmd_verify(a: &VerifyArgs, start: Instant) -> Result<(), Failure> {
    let mut inputs = Vec::new();
    let mut report_body = RunReport::new(&format!("verify --check {}", a.check.name()), Vec::new());
    match a.check {
        CheckArg::Compose | CheckArg::FamilyLaplacian => {
            if a.members.len() < 2 {
                return Err(Failure::Input(format!(
                    "--check {} needs at least two --member inputs",
                    a.check.name()
                )));
            }
            let mut members = Vec::with_capacity(a.members.len());
            for m in &a.members {
                let (f, d) = load_input(m, "--member", a.axis, a.axis2)?;
                members.push(f);
                inputs.push(d);
            }
            let r = match a.check {
                CheckArg::Compose => {
                    let fam = RooftopFamily::new(members).map_err(input)?;
                    compose_check(&fam).map_err(input)?
                }
                _ => verify_family_laplacian(&members, a.bound).map_err(input)?,
            };
            report_body.push_report(&r);
        }
        CheckArg::SigmaConcavity => {
            let psi0 = a.psi0.as_deref().ok_or_else(|| {
                Failure::Input(String::from("--check sigma-concavity needs --psi0"))
            })?;
            let psi1 = a.psi1.as_deref().ok_or_else(|| {
                Failure::Input(String::from("--check sigma-concavity needs --psi1"))
            })?;
            let (f0, d0) = load_input(psi0, "--psi0", a.axis, None)?;
            let (f1, d1) = load_input(psi1, "--psi1", a.axis, None)?;
            inputs.push(d0);
            inputs.push(d1);
            let sigma_axis = match a.sigma {
                Some(spec) => spec.to_axis()?,
                None => {
                    let (lo, hi) = required_sigma_window(&f0, &f1).map_err(input)?;
                    Axis::new(lo, hi, 65).map_err(input)?
                }
            };
            let probe = a.probe.unwrap_or(f0.len() / 2);
            let r = sigma_concavity_check(&f0, &f1, sigma_axis, probe).map_err(input)?;
            report_body.push_report(&r);
        }
    }
    report_body.inputs = inputs;
    finish(report_body, a.report.as_deref(), start, false)
}
