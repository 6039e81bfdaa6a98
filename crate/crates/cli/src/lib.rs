//! The `gevrey` command: problem files in, canonical JSON reports out.
//!
//! Exit codes: 0 on success, 2 for malformed input, 3 for numeric failures
//! (quadrature limits, failed checks, divergence flags under `--strict`).

use std::f64::consts::FRAC_PI_4;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gevrey_core::borel::{self, ComplexVal, PathSpec, QuadParams, BRANCH};
use gevrey_core::dsl::ProblemSpec;
use gevrey_core::flow::{flow_linear_exp, flow_recurrence, FlowResult};
use gevrey_core::gevrey::{gevrey_report, norm_sequence, NormMode};
use gevrey_core::series::coeff_to_string;
use gevrey_core::series::json::{to_canonical_string, tseries_from_json};
use gevrey_core::{demos, Error};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "gevrey", version, about = "Formal flows, Gevrey growth and Borel-Laplace sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Formal flow of a problem file to order K in t.
    Flow(FlowArgs),
    /// Norm sequence, growth fit and minimal-R table of a flow.
    Gevrey(GevreyArgs),
    /// Central binomials against the coefficients of (1-4ξ)^{-1/2}.
    BorelCheck(BorelCheckArgs),
    /// Laplace integral of (1-4ξ)^{-1/2} along a ray, the cut or a winding path.
    Laplace(LaplaceArgs),
    /// Built-in worked examples; `all` runs every one.
    Demo(DemoArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Orders {
    #[arg(long = "order-t")]
    order_t: Option<usize>,
    #[arg(long = "trunc-deg")]
    trunc_deg: Option<u32>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Recurrence,
    #[value(name = "linear_exp", alias = "linear-exp")]
    LinearExp,
}

#[derive(Args, Debug)]
struct FlowArgs {
    #[arg(long)]
    problem: PathBuf,
    #[command(flatten)]
    orders: Orders,
    #[arg(long, value_enum, default_value = "recurrence")]
    method: Method,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct GevreyArgs {
    /// A flow report or bare t-series document.
    #[arg(long, conflicts_with = "problem", required_unless_present = "problem")]
    coeffs: Option<PathBuf>,
    /// Compute the flow first.
    #[arg(long)]
    problem: Option<PathBuf>,
    #[command(flatten)]
    orders: Orders,
    #[arg(long, default_value = "abs_at_origin")]
    mode: String,
    /// `a:b`, inclusive; defaults to `1:K`.
    #[arg(long)]
    window: Option<String>,
    /// Largest order in the minimal-R table.
    #[arg(long, default_value_t = 3)]
    s: u32,
    /// Exit 3 when the row for `--s` is flagged divergent.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct BorelCheckArgs {
    #[arg(long = "order-t", default_value_t = 20)]
    order_t: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PathKind {
    Ray,
    Upper,
    Lower,
    Cut,
}

#[derive(Args, Debug)]
struct LaplaceArgs {
    /// `RE,IM` or a real number.
    #[arg(long, allow_hyphen_values = true)]
    w: String,
    #[arg(long, allow_hyphen_values = true)]
    angle: Option<f64>,
    /// Turns around ξ = 1/4 before leaving along the ray at `--angle`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "path")]
    winding: Option<i64>,
    #[arg(long, value_enum)]
    path: Option<PathKind>,
    #[arg(long = "rel-tol")]
    rel_tol: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct DemoArgs {
    name: String,
    #[command(flatten)]
    output: Output,
}

/// Failure of a command, classified by exit code.
#[derive(Debug)]
enum Failure {
    Input(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numeric() {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

struct Report {
    body: Value,
    /// Set when the command succeeded but a check or strict flag failed.
    numeric_failure: Option<String>,
}

impl Report {
    fn ok(body: Value) -> Self {
        Report { body, numeric_failure: None }
    }
}

/// Run with process arguments (including the program name), printing to the
/// standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (result, target) = match &cli.command {
        Command::Flow(a) => (flow(a), &a.output),
        Command::Gevrey(a) => (gevrey(a), &a.output),
        Command::BorelCheck(a) => (borel_check(a), &a.output),
        Command::Laplace(a) => (laplace(a), &a.output),
        Command::Demo(a) => (demo(a), &a.output),
    };
    let report = match result {
        Ok(r) => r,
        Err(Failure::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            return EXIT_INPUT;
        }
        Err(Failure::Numeric(m)) => {
            let _ = writeln!(err, "numeric error: {m}");
            return EXIT_NUMERIC;
        }
    };
    let text = match to_canonical_string(&report.body) {
        Ok(t) => t + "\n",
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_NUMERIC;
        }
    };
    let written = match &target.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(m) = written {
        let _ = writeln!(err, "error: {m}");
        return EXIT_INPUT;
    }
    match report.numeric_failure {
        Some(m) => {
            let _ = writeln!(err, "check failed: {m}");
            EXIT_NUMERIC
        }
        None => EXIT_OK,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

/// Parse, validate and apply order overrides.
fn load_problem(path: &Path, orders: &Orders) -> Result<ProblemSpec, Failure> {
    let text = read(path)?;
    let located = |e: Error| Failure::from(e.located(path.display().to_string()));
    let p = ProblemSpec::from_json(&text).map_err(located)?;
    if orders.order_t.is_none() && orders.trunc_deg.is_none() {
        return Ok(p);
    }
    p.with_orders(orders.order_t, orders.trunc_deg).map_err(located)
}

fn compute_flow(p: &ProblemSpec, method: Method) -> Result<FlowResult, Failure> {
    Ok(match method {
        Method::Recurrence => flow_recurrence(p)?,
        Method::LinearExp => flow_linear_exp(p)?,
    })
}

fn flow(a: &FlowArgs) -> Result<Report, Failure> {
    let p = load_problem(&a.problem, &a.orders)?;
    let fr = compute_flow(&p, a.method)?;
    Ok(Report::ok(serde_json::to_value(fr.to_report()).map_err(|e| Failure::from(Error::from(e)))?))
}

fn parse_window(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Input(format!("window must look like a:b, got `{text}`"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().parse().map_err(|_| bad())?;
    Ok((a, b))
}

fn gevrey(a: &GevreyArgs) -> Result<Report, Failure> {
    let series = match (&a.coeffs, &a.problem) {
        (Some(path), _) => {
            let text = read(path)?;
            tseries_from_json(&text).map_err(|e| Failure::from(e.located(path.display().to_string())))?
        }
        (None, Some(path)) => compute_flow(&load_problem(path, &a.orders)?, Method::Recurrence)?.series,
        (None, None) => return Err(Failure::Input("one of --coeffs or --problem is required".into())),
    };
    let mode: NormMode = a.mode.parse()?;
    if a.s == 0 {
        return Err(Failure::Input("--s must be at least 1".into()));
    }
    let window = match &a.window {
        Some(w) => parse_window(w)?,
        None => (1, series.order_t()),
    };
    let seq = norm_sequence(&series, mode)?;
    let report = gevrey_report(&seq, window, a.s)?;
    let divergent = report.divergent_at(a.s);
    let body = serde_json::to_value(&report).map_err(|e| Failure::from(Error::from(e)))?;
    Ok(Report {
        body,
        numeric_failure: (a.strict && divergent).then(|| format!("s = {} is flagged divergent", a.s)),
    })
}

fn borel_check(a: &BorelCheckArgs) -> Result<Report, Failure> {
    let pass = borel::borel_series_check(a.order_t);
    let coeffs: Vec<String> = borel::central_binomials(a.order_t).iter().map(coeff_to_string).collect();
    Ok(Report {
        body: json!({ "K": a.order_t, "pass": pass, "central_binomials": coeffs }),
        numeric_failure: (!pass).then(|| "central binomials differ from the binomial series".to_string()),
    })
}

fn parse_w(text: &str) -> Result<ComplexVal, Failure> {
    let bad = || Failure::Input(format!("--w must be RE,IM or RE, got `{text}`"));
    let (re, im) = match text.split_once(',') {
        Some((re, im)) => (re, im),
        None => (text, "0"),
    };
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(ComplexVal::new(re, im))
}

fn laplace(a: &LaplaceArgs) -> Result<Report, Failure> {
    let w = parse_w(&a.w)?;
    let angle = a.angle.unwrap_or(FRAC_PI_4);
    let path = match (a.winding, a.path) {
        (Some(k), _) => PathSpec::Winding { k, base_angle: angle },
        (None, Some(PathKind::Upper)) => PathSpec::upper(),
        (None, Some(PathKind::Lower)) => PathSpec::lower(),
        (None, Some(PathKind::Cut)) => PathSpec::RealCut,
        (None, Some(PathKind::Ray) | None) => PathSpec::Ray { angle },
    };
    let q = match a.rel_tol {
        Some(t) => QuadParams::with_rel_tol(t),
        None => QuadParams::default(),
    };
    let r = borel::laplace(w, &path, &q)?;
    Ok(Report::ok(json!({
        "w": [w.re, w.im],
        "value": r.pair(),
        "est_error": r.error,
        "branch": BRANCH,
        "path": path,
        "subdivisions": r.subdivisions,
    })))
}

fn demo(a: &DemoArgs) -> Result<Report, Failure> {
    let reports = if a.name == "all" { demos::run_all()? } else { vec![demos::run_demo(&a.name)?] };
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| r.checks.iter().filter(|c| !c.pass).map(move |c| format!("{}: {}", r.name, c.name)))
        .collect();
    let body = if a.name == "all" { json!(reports) } else { json!(reports[0]) };
    Ok(Report { body, numeric_failure: (!failed.is_empty()).then(|| failed.join("; ")) })
}
