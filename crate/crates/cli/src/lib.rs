//! Command-line front end for the `nilform` engine.
//!
//! [`run`] parses an argument vector and returns the exit code together with
//! everything that would be written to stdout and stderr, so the binary is a
//! thin wrapper and tests can drive commands in-process.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nilform::stokes::random::{random_form, random_point, random_tangents, trial_rng};
use nilform::stokes::{flux_pairing, sweep, FieldPool, SweepConfig, SweepSummary};
use nilform::{
    parse_form, verify_with_rhs, Backend, DifferentialForm, Error, Microcube, Rational, Scalar, ScalarField,
    Tolerance, VectorField3, VerificationReport, Weil,
};
use serde::{Deserialize, Serialize};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "nilform", version, about = "Differential forms and Stokes identities over nilpotent infinitesimals")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Ambient dimension n.
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Scalar backend; `check` defaults to rational, everything else to float.
    #[arg(long, global = true, value_enum)]
    pub backend: Option<BackendArg>,
    /// Relative tolerance for float comparisons.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Float,
    Rational,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Float => Backend::Float,
            BackendArg::Rational => Backend::Rational,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PoolArg {
    Polynomial,
    Transcendental,
}

impl From<PoolArg> for FieldPool {
    fn from(p: PoolArg) -> FieldPool {
        match p {
            PoolArg::Polynomial => FieldPool::Polynomial,
            PoolArg::Transcendental => FieldPool::Transcendental,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exterior derivative of a form.
    D {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        /// Return the zero (n+1)-form for a top-degree input instead of failing.
        #[arg(long)]
        allow_top: bool,
    },
    /// Evaluate a form at a point on tangent vectors.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        /// Comma separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Semicolon separated vectors, one per degree.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        tangents: String,
        /// Evaluate at `at + direction * e1` and print the Weil value.
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
    },
    /// Compare the boundary integral with the integral of d over a microcube.
    Stokes {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "random")]
        form: Option<String>,
        /// Draw the form, base point and tangents from the seed.
        #[arg(long)]
        random: bool,
        /// Degree of the random form.
        #[arg(long, requires = "random")]
        degree: Option<usize>,
        #[arg(long, value_enum, default_value = "polynomial", requires = "random")]
        pool: PoolArg,
        /// Comma separated base point; the origin by default.
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        /// Semicolon separated tangents; the first k+1 axis vectors by default.
        #[arg(long, allow_hyphen_values = true)]
        tangents: Option<String>,
        /// Use this form instead of d(form) on the right-hand side.
        #[arg(long, allow_hyphen_values = true)]
        rhs_form: Option<String>,
    },
    /// grad, curl, div and flux on R^3.
    Vcalc {
        #[arg(value_enum)]
        op: VcalcOp,
        /// Scalar field for grad.
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        fx: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        fy: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        fz: Option<String>,
        /// Point, first and second edge for flux.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Randomized sweep over all checks.
    Check {
        /// Degrees as `a..b` (inclusive), a comma list, or a single value.
        #[arg(long)]
        degrees: Option<String>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, value_enum, default_value = "polynomial")]
        pool: PoolArg,
        /// Probes per form for the skewness check.
        #[arg(long, default_value_t = 10)]
        probes: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VcalcOp {
    Grad,
    Curl,
    Div,
    Flux,
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn usage(message: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

/// One Weil coefficient; values are strings so rationals survive exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coefficient {
    pub monomial: Vec<usize>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StokesInputs {
    pub form: String,
    pub rhs_form: String,
    pub base: Vec<String>,
    pub tangents: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StokesReport {
    pub command: String,
    pub dim: usize,
    pub degree: usize,
    pub backend: String,
    pub seed: Option<u64>,
    pub inputs: StokesInputs,
    pub lhs: Vec<Coefficient>,
    pub rhs: Vec<Coefficient>,
    pub top_residual: String,
    pub lower_order_max: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DReport {
    pub command: String,
    pub dim: usize,
    pub degree: usize,
    pub form: String,
    pub result: String,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalReport {
    pub command: String,
    pub dim: usize,
    pub degree: usize,
    pub backend: String,
    pub form: String,
    pub at: Vec<String>,
    pub tangents: Vec<Vec<String>>,
    /// Present when evaluating along a direction.
    pub weil: Option<Vec<Coefficient>>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcalcReport {
    pub command: String,
    pub op: String,
    pub result: String,
    /// Only for flux: the triple product the form value must equal.
    pub check: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub degree: usize,
    pub trials: usize,
    pub stokes_failures: usize,
    pub extraction_failures: usize,
    pub alternating_failures: usize,
    pub dd_failures: usize,
    pub dd_checked: usize,
    pub max_top_residual: f64,
    pub max_lower_order: f64,
    pub max_extraction_residual: f64,
    pub max_dd_residual: f64,
    pub first_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub command: String,
    pub dim: usize,
    pub backend: String,
    pub pool: String,
    pub seed: u64,
    pub trials: usize,
    pub degrees: Vec<DegreeRow>,
    pub pass: bool,
}

pub fn coefficient_table<S: Scalar>(w: &Weil<S>) -> Vec<Coefficient> {
    w.terms_graded()
        .into_iter()
        .map(|(mono, c)| Coefficient { monomial: mono.generators(), value: c.to_string() })
        .collect()
}

fn usage_error(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn parse_vector<S: Scalar>(text: &str) -> Result<Vec<S>, String> {
    text.split(',').map(|t| S::parse_value(t).map_err(usage_error)).collect()
}

pub fn parse_vectors<S: Scalar>(text: &str) -> Result<Vec<Vec<S>>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(';').map(parse_vector).collect()
}

/// `a..b` inclusive, `a,b,c`, or a single degree.
pub fn parse_degrees(text: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("invalid degree list `{text}`");
    if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

fn tolerance(common: &Common) -> Result<Tolerance, String> {
    match common.tol {
        None => Ok(Tolerance::default()),
        Some(rel) if rel.is_finite() && rel >= 0.0 => Ok(Tolerance { rel, ..Tolerance::default() }),
        Some(rel) => Err(format!("invalid tolerance {rel}")),
    }
}

fn strings<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn axis_vectors<S: Scalar>(n: usize, count: usize) -> Vec<Vec<S>> {
    (0..count).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect()
}

/// Everything `stokes` needs after argument parsing.
#[derive(Debug, Clone)]
pub struct StokesRequest {
    pub dim: usize,
    pub seed: Option<u64>,
    pub form: Option<String>,
    pub random_degree: Option<usize>,
    pub pool: FieldPool,
    pub base: Option<String>,
    pub tangents: Option<String>,
    pub rhs_form: Option<String>,
    pub tolerance: Tolerance,
}

fn stokes_typed<S: Scalar>(req: &StokesRequest) -> Result<(StokesReport, VerificationReport<S>), String> {
    let n = req.dim;
    let mut rng = trial_rng(req.seed.unwrap_or(0), 0);
    let (form, random_inputs) = match (&req.form, req.random_degree) {
        (Some(text), _) => {
            let parsed = parse_form(text, n).map_err(usage_error)?;
            (parsed.form, None)
        }
        (None, Some(k)) => {
            if k >= n {
                return Err(format!("random degree {k} needs k + 1 <= dim = {n}"));
            }
            let form = random_form(&mut rng, n, k, req.pool);
            let base: Vec<S> = random_point(&mut rng, n, req.pool);
            let tangents: Vec<Vec<S>> = random_tangents(&mut rng, n, k + 1);
            (form, Some((base, tangents)))
        }
        (None, None) => return Err("stokes needs --form or --random".into()),
    };
    let k = form.degree();
    if k >= n {
        return Err(Error::TopDegree(n).to_string());
    }
    let (random_base, random_tangents) = random_inputs.unzip();
    let base: Vec<S> = match &req.base {
        Some(text) => parse_vector(text)?,
        None => random_base.unwrap_or_else(|| vec![S::zero(); n]),
    };
    let tangents: Vec<Vec<S>> = match &req.tangents {
        Some(text) => parse_vectors(text)?,
        None => random_tangents.unwrap_or_else(|| axis_vectors(n, k + 1)),
    };
    if base.len() != n {
        return Err(format!("base point has {} coordinates, expected {n}", base.len()));
    }
    if tangents.len() != k + 1 {
        return Err(format!("a {k}-form needs {} tangents, got {}", k + 1, tangents.len()));
    }
    let rhs_form = match &req.rhs_form {
        Some(text) => DifferentialForm::parse(text, n).map_err(usage_error)?,
        None => form.d().map_err(usage_error)?,
    };
    let cube = Microcube::new(&base, tangents.clone(), k + 1).map_err(usage_error)?;
    let report = verify_with_rhs(&form, &rhs_form, &cube, &req.tolerance).map_err(usage_error)?;
    let json = StokesReport {
        command: "stokes".into(),
        dim: n,
        degree: k,
        backend: S::BACKEND.to_string(),
        seed: req.seed,
        inputs: StokesInputs {
            form: form.to_string(),
            rhs_form: rhs_form.to_string(),
            base: strings(&base),
            tangents: tangents.iter().map(|t| strings(t)).collect(),
        },
        lhs: coefficient_table(&report.lhs),
        rhs: coefficient_table(&report.rhs),
        top_residual: report.top_residual.to_string(),
        lower_order_max: report.lower_order_max.to_string(),
        pass: report.pass,
    };
    Ok((json, report))
}

/// Runs `stokes` and returns the serializable report with its text rendering.
pub fn stokes_report(req: &StokesRequest, backend: Backend) -> Result<(StokesReport, String), String> {
    fn render<S: Scalar>(json: &StokesReport, report: &VerificationReport<S>) -> String {
        format!("form: {}\nright-hand form: {}\n{report}\n", json.inputs.form, json.inputs.rhs_form)
    }
    match backend {
        Backend::Rational => stokes_typed::<Rational>(req).map(|(j, r)| {
            let text = render(&j, &r);
            (j, text)
        }),
        Backend::Float => stokes_typed::<f64>(req).map(|(j, r)| {
            let text = render(&j, &r);
            (j, text)
        }),
    }
}

fn eval_typed<S: Scalar>(
    n: usize,
    form_text: &str,
    at: &str,
    tangents: &str,
    direction: Option<&str>,
) -> Result<EvalReport, String> {
    let form = DifferentialForm::parse(form_text, n).map_err(usage_error)?;
    let x: Vec<S> = parse_vector(at)?;
    let t: Vec<Vec<S>> = parse_vectors(tangents)?;
    if x.len() != n {
        return Err(format!("point has {} coordinates, expected {n}", x.len()));
    }
    let (point, m) = match direction {
        Some(text) => {
            let v: Vec<S> = parse_vector(text)?;
            if v.len() != n {
                return Err(format!("direction has {} coordinates, expected {n}", v.len()));
            }
            let e = Weil::generator(1, 1).map_err(usage_error)?;
            let p = x
                .iter()
                .zip(&v)
                .map(|(c, d)| Ok(&Weil::from_real(c.clone(), 1)? + &e.scale(d)))
                .collect::<nilform::Result<Vec<_>>>()
                .map_err(usage_error)?;
            (p, 1)
        }
        None => (x.iter().map(|c| Weil::from_real(c.clone(), 0)).collect::<nilform::Result<_>>().map_err(usage_error)?, 0),
    };
    let value = form.eval(&point, &t).map_err(usage_error)?;
    Ok(EvalReport {
        command: "eval".into(),
        dim: n,
        degree: form.degree(),
        backend: S::BACKEND.to_string(),
        form: form.to_string(),
        at: strings(&x),
        tangents: t.iter().map(|v| strings(v)).collect(),
        weil: (m > 0).then(|| coefficient_table(&value)),
        value: if m > 0 { value.to_string() } else { value.real().to_string() },
    })
}

fn field3(name: &str, text: &Option<String>) -> Result<ScalarField, String> {
    let text = text.as_deref().ok_or_else(|| format!("missing --{name}"))?;
    ScalarField::parse(text, 3).map_err(usage_error)
}

fn vcalc_field(fx: &Option<String>, fy: &Option<String>, fz: &Option<String>) -> Result<VectorField3, String> {
    VectorField3::new(field3("fx", fx)?, field3("fy", fy)?, field3("fz", fz)?).map_err(usage_error)
}

fn flux_typed<S: Scalar>(field: &VectorField3, at: &str, a: &str, b: &str) -> Result<VcalcReport, String> {
    let (x, a, b): (Vec<S>, Vec<S>, Vec<S>) = (parse_vector(at)?, parse_vector(a)?, parse_vector(b)?);
    let pairing = flux_pairing(field, &x, &a, &b).map_err(usage_error)?;
    let pass = if S::BACKEND == Backend::Rational {
        pairing.agree()
    } else {
        let r = pairing.form_value.clone() - pairing.triple_product.clone();
        S::within(&r, pairing.form_value.magnitude().max(pairing.triple_product.magnitude()), &Tolerance::default())
    };
    Ok(VcalcReport {
        command: "vcalc".into(),
        op: "flux".into(),
        result: pairing.form_value.to_string(),
        check: Some(pairing.triple_product.to_string()),
        pass,
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(code, text)
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => outcome,
        Err(message) => Outcome::usage(message),
    }
}

fn emit<T: Serialize>(json: bool, report: &T, text: String) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
        s.push('\n');
        s
    } else {
        text
    }
}

fn execute(cli: &Cli) -> Result<Outcome, String> {
    let common = &cli.common;
    let tol = tolerance(common)?;
    let dim = common.dim.unwrap_or(3);
    if dim == 0 {
        return Err("dimension must be at least 1".into());
    }
    match &cli.command {
        Command::D { form, allow_top } => {
            let parsed = parse_form(form, dim).map_err(usage_error)?;
            let d = if *allow_top { parsed.form.d_allow_top() } else { parsed.form.d() }.map_err(usage_error)?;
            let report = DReport {
                command: "d".into(),
                dim,
                degree: parsed.form.degree(),
                form: parsed.form.to_string(),
                result: d.to_string(),
                warnings: parsed.warnings.clone(),
            };
            let stdout = emit(common.json, &report, format!("{d}\n"));
            let stderr = parsed.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
            Ok(Outcome { code: EXIT_PASS, stdout, stderr })
        }
        Command::Eval { form, at, tangents, direction } => {
            let backend = common.backend.map_or(Backend::Float, Backend::from);
            let report = match backend {
                Backend::Float => eval_typed::<f64>(dim, form, at, tangents, direction.as_deref()),
                Backend::Rational => eval_typed::<Rational>(dim, form, at, tangents, direction.as_deref()),
            }?;
            let text = format!("{}\n", report.value);
            Ok(Outcome::ok(EXIT_PASS, emit(common.json, &report, text)))
        }
        Command::Stokes { form, random, degree, pool, base, tangents, rhs_form } => {
            let backend = common.backend.map_or(Backend::Float, Backend::from);
            let pool = FieldPool::from(*pool);
            if backend == Backend::Rational && pool == FieldPool::Transcendental {
                return Err("transcendental fields need the float backend".into());
            }
            let req = StokesRequest {
                dim,
                seed: common.seed.or(random.then_some(0)),
                form: form.clone(),
                random_degree: if *random { Some(degree.unwrap_or(1)) } else { None },
                pool,
                base: base.clone(),
                tangents: tangents.clone(),
                rhs_form: rhs_form.clone(),
                tolerance: tol,
            };
            let (report, text) = stokes_report(&req, backend)?;
            let code = if report.pass { EXIT_PASS } else { EXIT_FAIL };
            Ok(Outcome::ok(code, emit(common.json, &report, text)))
        }
        Command::Vcalc { op, f, fx, fy, fz, at, a, b } => {
            let backend = common.backend.map_or(Backend::Float, Backend::from);
            let report = match op {
                VcalcOp::Grad => {
                    let phi = field3("f", f)?;
                    let g = VectorField3::grad(&phi).map_err(usage_error)?;
                    VcalcReport { command: "vcalc".into(), op: "grad".into(), result: g.to_string(), check: None, pass: true }
                }
                VcalcOp::Curl => {
                    let c = vcalc_field(fx, fy, fz)?.curl().map_err(usage_error)?;
                    VcalcReport { command: "vcalc".into(), op: "curl".into(), result: c.to_string(), check: None, pass: true }
                }
                VcalcOp::Div => {
                    let d = vcalc_field(fx, fy, fz)?.div().map_err(usage_error)?;
                    VcalcReport { command: "vcalc".into(), op: "div".into(), result: d.to_string(), check: None, pass: true }
                }
                VcalcOp::Flux => {
                    let field = vcalc_field(fx, fy, fz)?;
                    let need = |name: &str, v: &Option<String>| v.clone().ok_or_else(|| format!("flux needs --{name}"));
                    let (at, a, b) = (need("at", at)?, need("a", a)?, need("b", b)?);
                    match backend {
                        Backend::Float => flux_typed::<f64>(&field, &at, &a, &b),
                        Backend::Rational => flux_typed::<Rational>(&field, &at, &a, &b),
                    }?
                }
            };
            let mut text = format!("{}\n", report.result);
            if let Some(check) = &report.check {
                let _ = writeln!(text, "triple product: {check}");
                let _ = writeln!(text, "pass: {}", report.pass);
            }
            let code = if report.pass { EXIT_PASS } else { EXIT_FAIL };
            Ok(Outcome::ok(code, emit(common.json, &report, text)))
        }
        Command::Check { degrees, trials, pool, probes } => {
            let degrees = match degrees {
                Some(text) => parse_degrees(text)?,
                None => (0..dim).collect(),
            };
            let config = SweepConfig {
                dim,
                degrees,
                trials: *trials,
                seed: common.seed.unwrap_or(0),
                backend: common.backend.map_or(Backend::Rational, Backend::from),
                pool: (*pool).into(),
                tolerance: tol,
                probes: *probes,
            };
            let summary = sweep(&config).map_err(usage_error)?;
            let report = check_report(&summary);
            let code = if summary.pass() { EXIT_PASS } else { EXIT_FAIL };
            Ok(Outcome::ok(code, emit(common.json, &report, format!("{summary}\n"))))
        }
    }
}

pub fn check_report(summary: &SweepSummary) -> CheckReport {
    let c = &summary.config;
    CheckReport {
        command: "check".into(),
        dim: c.dim,
        backend: c.backend.to_string(),
        pool: format!("{:?}", c.pool).to_lowercase(),
        seed: c.seed,
        trials: c.trials,
        degrees: summary
            .degrees
            .iter()
            .map(|d| DegreeRow {
                degree: d.degree,
                trials: d.trials,
                stokes_failures: d.stokes_failures,
                extraction_failures: d.extraction_failures,
                alternating_failures: d.alternating_failures,
                dd_failures: d.dd_failures,
                dd_checked: d.dd_checked,
                max_top_residual: d.max_top_residual,
                max_lower_order: d.max_lower_order,
                max_extraction_residual: d.max_extraction_residual,
                max_dd_residual: d.max_dd_residual,
                first_error: d.first_error.clone(),
            })
            .collect(),
        pass: summary.pass(),
    }
}
