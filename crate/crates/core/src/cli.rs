//! Command-line front end: run configurations, config files, and the
//! `veelab` argument parser.

use std::ffi::OsString;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::catalog::{build_named, entry, list_catalog, Params, Poly2d, NAMES};
use crate::error::{Error, Result};
use crate::exact::ExactScalar;
use crate::geometry::{gram_operator, Vector, VectorConfig, C64};
use crate::identity_field::{
    b_defects, b_matrix, closed_form_identity, identity_for_metric, minor_coefficients, minor_identity_field,
    verify_identity_field, CaseTag, ClosedFormCase,
};
use crate::linalg::{guarded_inverse, singular_values, CMatrix};
use crate::prepotential::{commutativity_residual, sample_points, third_derivative_tensor, wdvv_residual, Kernel, PointSample};
use crate::report::{CheckReport, CheckResult, Hypothesis};
use crate::restriction::{restrict, restricted_commutativity, subsystem, tangency_check};
use crate::solver::{relation_scan, ROOT_TOL};
use crate::vee_check::{condition2_residual, euclidean_vee_residual, rational_complex_vee_check};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Vee,
    Condition2,
    Commute,
    Wdvv,
    Identity,
    Restrict,
    Scan,
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        <Self as ValueEnum>::from_str(s.trim(), true)
            .map_err(|_| Error::BadParameter { name: "checks".into(), reason: format!("unknown check '{s}'") })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum KernelChoice {
    #[default]
    Trig,
    Rational,
}

impl KernelChoice {
    fn kernel(self) -> Kernel {
        match self {
            KernelChoice::Trig => Kernel::Trig,
            KernelChoice::Rational => Kernel::Rational,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Minors,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Human,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verb {
    Check,
    Identity { compare: Vec<Route> },
    Restrict { along: Vec<Vector> },
    Scan { free: String, interval: (f64, f64), grid: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub verb: Verb,
    /// Catalog name or path to a configuration file.
    pub target: String,
    pub params: Params,
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
    /// Empty means the verb's defaults.
    pub checks: Vec<CheckKind>,
    pub format: Format,
    pub i0: usize,
    pub kernel: KernelChoice,
}

impl RunConfig {
    pub fn new(verb: Verb, target: impl Into<String>) -> Self {
        Self {
            verb,
            target: target.into(),
            params: Params::new(),
            points: 20,
            seed: 7,
            tol: 1e-8,
            checks: vec![],
            format: Format::Human,
            i0: 0,
            kernel: KernelChoice::Trig,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::BadParameter { name: "tol".into(), reason: "must be positive".into() });
        }
        if self.points == 0 {
            return Err(Error::BadParameter { name: "points".into(), reason: "at least one point".into() });
        }
        Ok(())
    }

    fn checks(&self) -> Vec<CheckKind> {
        if !self.checks.is_empty() {
            return self.checks.clone();
        }
        match self.verb {
            Verb::Check => vec![CheckKind::Vee, CheckKind::Condition2, CheckKind::Commute],
            Verb::Identity { .. } => vec![CheckKind::Identity],
            Verb::Restrict { .. } => vec![CheckKind::Restrict],
            Verb::Scan { .. } => vec![CheckKind::Scan],
        }
    }
}

fn component(v: &Value, at: &str) -> Result<std::result::Result<ExactScalar, f64>> {
    let bad = |msg: String| Error::Parse { location: at.to_string(), message: msg };
    match v {
        Value::String(s) => match ExactScalar::from_str(s) {
            Ok(x) => Ok(Ok(x)),
            Err(_) => s.trim().parse::<f64>().map(Err).map_err(|_| bad(format!("'{s}' is neither an exact token nor a number"))),
        },
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Ok(ExactScalar::from_int(i))),
            None => Ok(Err(n.as_f64().unwrap_or(f64::NAN))),
        },
        other => Err(bad(format!("expected a number or string, found {other}"))),
    }
}

fn multiplicity(v: &Value, at: &str) -> Result<C64> {
    let bad = |msg: String| Error::Parse { location: at.to_string(), message: msg };
    match v {
        Value::Number(n) => Ok(C64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::String(_) => Ok(match component(v, at)? {
            Ok(x) => C64::new(x.to_f64(), 0.0),
            Err(x) => C64::new(x, 0.0),
        }),
        Value::Object(map) => {
            let part = |k: &str| match map.get(k) {
                None => Ok(0.0),
                Some(Value::Number(n)) => Ok(n.as_f64().unwrap_or(f64::NAN)),
                Some(other) => Err(bad(format!("'{k}' must be a number, found {other}"))),
            };
            Ok(C64::new(part("re")?, part("im")?))
        }
        other => Err(bad(format!("expected a number or {{\"re\", \"im\"}}, found {other}"))),
    }
}

/// Parse the JSON configuration format from a string; `origin` prefixes
/// error locations.
pub fn parse_config_str(text: &str, origin: &str) -> Result<VectorConfig> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("{origin}:{}:{}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let field = |k: &str| root.get(k).ok_or_else(|| Error::Parse { location: origin.to_string(), message: format!("missing key '{k}'") });
    let dim = field("dim")?
        .as_u64()
        .ok_or_else(|| Error::Parse { location: format!("{origin}: dim"), message: "expected a positive integer".into() })? as usize;
    let rows = field("vectors")?
        .as_array()
        .ok_or_else(|| Error::Parse { location: format!("{origin}: vectors"), message: "expected an array".into() })?;
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let at = format!("{origin}: vectors[{i}]");
        let row = row.as_array().ok_or_else(|| Error::Parse { location: at.clone(), message: "expected an array".into() })?;
        if row.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
        }
        parsed.push(row.iter().enumerate().map(|(j, v)| component(v, &format!("{at}[{j}]"))).collect::<Result<Vec<_>>>()?);
    }
    let mults = field("multiplicities")?
        .as_array()
        .ok_or_else(|| Error::Parse { location: format!("{origin}: multiplicities"), message: "expected an array".into() })?
        .iter()
        .enumerate()
        .map(|(i, v)| multiplicity(v, &format!("{origin}: multiplicities[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let exact = parsed.iter().flatten().all(|c| c.is_ok());
    let vectors = parsed
        .into_iter()
        .map(|row| {
            if exact {
                Vector::Exact(row.into_iter().map(|c| c.unwrap()).collect())
            } else {
                Vector::Numeric(row.into_iter().map(|c| C64::new(c.map_or_else(|x| x, |x| x.to_f64()), 0.0)).collect())
            }
        })
        .collect();
    VectorConfig::new(dim, vectors, mults)
}

pub fn parse_config_file(path: &Path) -> Result<VectorConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config_str(&text, &path.display().to_string())
}

enum Resolved {
    Config(VectorConfig),
    Poly(Poly2d),
}

fn resolve(rc: &RunConfig) -> Result<Resolved> {
    if rc.target == "poly2d" {
        return Ok(Resolved::Poly(Poly2d::from_params(&rc.params)?));
    }
    if NAMES.contains(&rc.target.as_str()) {
        return build_named(&rc.target, &rc.params).map(Resolved::Config);
    }
    let path = Path::new(&rc.target);
    if path.exists() {
        return parse_config_file(path).map(Resolved::Config);
    }
    Err(Error::UnknownName { name: rc.target.clone(), known: NAMES.join(", ") })
}

fn closed_case(rc: &RunConfig) -> Option<ClosedFormCase> {
    CaseTag::ALL.iter().filter(|t| t.accepts(&rc.target)).find_map(|&t| ClosedFormCase::new(t, &rc.target, &rc.params).ok())
}

fn record(report: &mut CheckReport, name: &str, tol: f64, value: Result<f64>) {
    report.push(match value {
        Ok(r) => CheckResult::new(name, r, tol),
        Err(e) => CheckResult::failed(name, e, tol),
    });
}

fn max_over<T>(items: &[T], mut f: impl FnMut(&T) -> Result<f64>) -> Result<f64> {
    items.iter().try_fold(0.0, |acc: f64, x| Ok(acc.max(f(x)?)))
}

fn check_config(rc: &RunConfig, cfg: &VectorConfig, checks: &[CheckKind], report: &mut CheckReport) -> Result<()> {
    let kernel = rc.kernel.kernel();
    let needs_points = checks.iter().any(|c| matches!(c, CheckKind::Commute | CheckKind::Wdvv | CheckKind::Identity));
    let points = if needs_points { sample_points(cfg, &kernel, rc.points, rc.seed)? } else { vec![] };
    let tensors = || points.iter().map(|p| third_derivative_tensor(cfg, &kernel, &p.point)).collect::<Result<Vec<_>>>();
    for check in checks {
        match check {
            CheckKind::Vee => {
                let vee = match rc.kernel {
                    KernelChoice::Trig => euclidean_vee_residual(cfg, rc.tol),
                    KernelChoice::Rational => {
                        let g = gram_operator(cfg);
                        let sv = singular_values(&g);
                        let ratio = sv.last().copied().unwrap_or(0.0) / sv.first().copied().unwrap_or(1.0).max(f64::MIN_POSITIVE);
                        report.hypotheses.push(Hypothesis::new("G_nondegenerate", ratio, ratio > 1e-12));
                        rational_complex_vee_check(cfg, rc.tol)
                    }
                };
                report.push(CheckResult::new("vee", vee.max_residual, rc.tol));
            }
            CheckKind::Condition2 => report.push(CheckResult::new("condition2", condition2_residual(cfg), rc.tol)),
            CheckKind::Commute => record(report, "commute", rc.tol, tensors().and_then(|ts| max_over(&ts, |t| Ok(commutativity_residual(t))))),
            CheckKind::Wdvv => {
                let mut worst_b: f64 = f64::INFINITY;
                let value = tensors().and_then(|ts| {
                    max_over(&ts, |t| {
                        let a = minor_coefficients(t, rc.i0).unwrap_or_else(|_| vec![C64::new(1.0, 0.0); t.dim()]);
                        let b = b_matrix(t, &a)?;
                        let sv = singular_values(&b);
                        worst_b = worst_b.min(sv.last().copied().unwrap_or(0.0) / sv[0].max(f64::MIN_POSITIVE));
                        wdvv_residual(t, &b)
                    })
                });
                record(report, "wdvv", rc.tol, value);
                if worst_b.is_finite() {
                    report.hypotheses.push(Hypothesis::new("B_nondegenerate", worst_b, worst_b > 1e-12));
                }
            }
            CheckKind::Identity => identity_checks(rc, cfg, &points, report),
            CheckKind::Restrict | CheckKind::Scan => {
                return Err(Error::BadParameter {
                    name: "checks".into(),
                    reason: format!("'{check:?}' needs its own verb").to_lowercase(),
                })
            }
        }
    }
    report.points = points;
    Ok(())
}

fn identity_checks(rc: &RunConfig, cfg: &VectorConfig, points: &[PointSample], report: &mut CheckReport) {
    let kernel = rc.kernel.kernel();
    let compare = match &rc.verb {
        Verb::Identity { compare } => compare.clone(),
        _ => vec![Route::Minors],
    };
    let mut minors: Vec<Vec<C64>> = Vec::new();
    let mut worst = Ok(0.0f64);
    let (mut off, mut spread, mut hs, mut cond) = (0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    for p in points {
        let step = third_derivative_tensor(cfg, &kernel, &p.point).and_then(|t| {
            let field = minor_identity_field(&t, rc.i0)?;
            let b = b_matrix(&t, &field.a)?;
            let d = b_defects(&b);
            off = off.max(d.off_diagonal / field.h.norm());
            spread = spread.max(d.diagonal_spread / field.h.norm());
            hs = hs.max(field.h_spread);
            let sv = &field.p_singular_values;
            cond = cond.min(sv.last().copied().unwrap_or(0.0) / sv.first().copied().unwrap_or(1.0).max(f64::MIN_POSITIVE));
            let r = verify_identity_field(&t, &field.e, None)?;
            minors.push(field.e);
            Ok(r)
        });
        worst = match (worst, step) {
            (Ok(a), Ok(b)) => Ok(a.max(b)),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
    }
    let failed = worst.is_err();
    record(report, "identity_minors", rc.tol, worst);
    if !failed {
        report.push(CheckResult::new("h_spread", hs, rc.tol));
        report.push(CheckResult::new("b_offdiagonal", off, rc.tol));
        report.push(CheckResult::new("b_diagonal_spread", spread, rc.tol));
        report.hypotheses.push(Hypothesis::new("P_conditioning", cond, cond > 1e-8));
    }
    if compare.contains(&Route::Closed) {
        let closed = match (rc.kernel, closed_case(rc)) {
            (KernelChoice::Rational, _) => Err(Error::BadParameter { name: "kernel".into(), reason: "closed forms are trigonometric".into() }),
            (_, None) => Err(Error::BadParameter {
                name: "target".into(),
                reason: format!("no closed-form case for {} with {}", rc.target, rc.params),
            }),
            (_, Some(case)) => points
                .iter()
                .map(|p| {
                    let t = third_derivative_tensor(cfg, &kernel, &p.point)?;
                    let e = closed_form_identity(&case, &p.point)?.e;
                    Ok((verify_identity_field(&t, &e, None)?, e))
                })
                .collect::<Result<Vec<_>>>(),
        };
        match closed {
            Ok(rows) => {
                report.push(CheckResult::new("identity_closed", rows.iter().map(|r| r.0).fold(0.0, f64::max), rc.tol));
                if !failed {
                    let gap = rows
                        .iter()
                        .zip(&minors)
                        .flat_map(|((_, e), m)| e.iter().zip(m).map(|(a, b)| (a - b).norm()))
                        .fold(0.0, f64::max);
                    report.push(CheckResult::new("minors_vs_closed", gap, rc.tol));
                }
            }
            Err(e) => report.push(CheckResult::failed("identity_closed", e, rc.tol)),
        }
    }
}

fn check_poly(rc: &RunConfig, poly: &Poly2d, checks: &[CheckKind], report: &mut CheckReport) -> Result<()> {
    let points = sample_points(&VectorConfig::empty(2), &Kernel::Rational, rc.points, rc.seed)?;
    let g_upper = poly.metric_upper();
    let g_lower: CMatrix = guarded_inverse(&g_upper, 1e-12)?;
    for check in checks {
        match check {
            CheckKind::Wdvv => record(report, "wdvv", rc.tol, max_over(&points, |p| wdvv_residual(&poly.tensor(&p.point), &g_lower))),
            CheckKind::Identity => {
                let value = max_over(&points, |p| identity_for_metric(&poly.tensor(&p.point), &g_upper, None, rc.i0).map(|m| m.residual));
                record(report, "identity_metric", rc.tol, value);
            }
            other => {
                return Err(Error::BadParameter {
                    name: "checks".into(),
                    reason: format!("'{other:?}' does not apply to poly2d").to_lowercase(),
                })
            }
        }
    }
    report.points = points;
    Ok(())
}

fn restrict_report(rc: &RunConfig, cfg: &VectorConfig, along: &[Vector]) -> Result<CheckReport> {
    let b = subsystem(cfg, along)?;
    let mut report = restricted_commutativity(cfg, &b, rc.points, rc.seed, rc.tol)?;
    if let Some(case) = closed_case(rc) {
        let frame = restrict(cfg, &b)?;
        let xi: Vec<Vec<C64>> = report.points.iter().map(|p| p.point.clone()).collect();
        record(&mut report, "tangent", 1e-9, tangency_check(&case, &frame, &xi).map(|t| t.max_normal));
        let value = max_over(&xi, |x| {
            let t = third_derivative_tensor(&frame.projected, &Kernel::Trig, x)?;
            let e = frame.coordinates(&closed_form_identity(&case, &frame.embed(x))?.e);
            verify_identity_field(&t, &e, None)
        });
        record(&mut report, "restricted_identity", rc.tol, value);
        report.finish();
    }
    Ok(report)
}

fn scan_report(rc: &RunConfig, free: &str, interval: (f64, f64), grid: usize) -> Result<CheckReport> {
    let scan = relation_scan(&rc.target, &rc.params, free, interval, grid)?;
    let mut report = CheckReport::new(format!("{} scan over {free} in [{}, {}]", rc.target, interval.0, interval.1), "");
    for root in &scan.roots {
        let p = rc.params.clone().with(free, root.value);
        let cfg = build_named(&rc.target, &p)?;
        report.digest = cfg.digest();
        report.push(CheckResult::new(format!("root {free}={}", root.value), root.residual, ROOT_TOL));
        let pts = sample_points(&cfg, &Kernel::Trig, rc.points, rc.seed)?;
        let value = max_over(&pts, |s| Ok(commutativity_residual(&third_derivative_tensor(&cfg, &Kernel::Trig, &s.point)?)));
        record(&mut report, &format!("commute at {free}={}", root.value), rc.tol, value);
    }
    Ok(report)
}

/// Run the requested checks. Exit status is `report.verdict.exit_code()`,
/// or 1 for an error.
pub fn run_check(rc: &RunConfig) -> Result<CheckReport> {
    rc.validate()?;
    let mut report = match &rc.verb {
        Verb::Restrict { along } => match resolve(rc)? {
            Resolved::Config(cfg) => restrict_report(rc, &cfg, along)?,
            Resolved::Poly(_) => return Err(Error::BadParameter { name: "target".into(), reason: "poly2d has no mirrors".into() }),
        },
        Verb::Scan { free, interval, grid } => scan_report(rc, free, *interval, *grid)?,
        _ => {
            let checks = rc.checks();
            match resolve(rc)? {
                Resolved::Config(cfg) => {
                    let mut report = CheckReport::new(rc.target.clone(), cfg.digest());
                    check_config(rc, &cfg, &checks, &mut report)?;
                    report
                }
                Resolved::Poly(poly) => {
                    let mut report = CheckReport::new(rc.target.clone(), poly.digest());
                    let checks = if rc.checks.is_empty() { vec![CheckKind::Wdvv, CheckKind::Identity] } else { checks };
                    check_poly(rc, &poly, &checks, &mut report)?;
                    report
                }
            }
        }
    };
    if !rc.params.is_empty() {
        report.params = Some(rc.params.to_string());
    }
    report.finish();
    Ok(report)
}

pub fn exit_status(result: &Result<CheckReport>) -> i32 {
    match result {
        Ok(r) => r.verdict.exit_code(),
        Err(_) => 1,
    }
}

#[derive(Debug, Parser)]
#[command(name = "veelab", version, about = "Check trigonometric and rational vee-systems and their identity fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Number of sample points
    #[arg(long, global = true, default_value_t = 20)]
    pub points: usize,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, global = true)]
    pub json: bool,
    /// Parameter assignment, e.g. r=-2 or m=3,1,2
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Comma-separated checks: vee, condition2, commute, wdvv, identity
    #[arg(long, global = true, value_delimiter = ',')]
    pub checks: Vec<CheckKind>,
    /// Pivot index for the minors route
    #[arg(long, global = true, default_value_t = 0)]
    pub i0: usize,
    #[arg(long, global = true, value_enum, default_value_t = KernelChoice::Trig)]
    pub kernel: KernelChoice,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run checks on a catalog configuration or a JSON file
    Check { target: String },
    /// Compute identity fields
    Identity {
        target: String,
        #[arg(long, value_delimiter = ',', default_value = "minors")]
        compare: Vec<Route>,
    },
    /// Restrict along the subsystem spanned by the given vectors
    Restrict {
        target: String,
        /// Comma-separated components, e.g. 0,0,1,-1 (repeatable)
        #[arg(long, required = true, allow_hyphen_values = true)]
        along: Vec<String>,
    },
    /// Find multiplicity relations along one free parameter
    Scan {
        target: String,
        #[arg(long)]
        free: String,
        /// lo,hi
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
        interval: Vec<f64>,
        #[arg(long, default_value_t = 33)]
        grid: usize,
    },
    /// List catalog entries
    Catalog { name: Option<String> },
}

fn parse_vector(text: &str) -> Result<Vector> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    Vector::parse_exact(&parts).or_else(|_| {
        parts
            .iter()
            .map(|p| p.parse::<f64>().map_err(|_| Error::Parse { location: format!("--along {text}"), message: format!("bad component '{p}'") }))
            .collect::<Result<Vec<f64>>>()
            .map(|xs| Vector::from_real(&xs))
    })
}

impl Cli {
    /// `None` for the catalog verb.
    pub fn run_config(&self) -> Result<Option<RunConfig>> {
        let (verb, target) = match &self.command {
            Command::Check { target } => (Verb::Check, target),
            Command::Identity { target, compare } => (Verb::Identity { compare: compare.clone() }, target),
            Command::Restrict { target, along } => {
                (Verb::Restrict { along: along.iter().map(|a| parse_vector(a)).collect::<Result<_>>()? }, target)
            }
            Command::Scan { target, free, interval, grid } => {
                if interval.len() != 2 {
                    return Err(Error::BadParameter { name: "interval".into(), reason: "expected lo,hi".into() });
                }
                (Verb::Scan { free: free.clone(), interval: (interval[0], interval[1]), grid: *grid }, target)
            }
            Command::Catalog { .. } => return Ok(None),
        };
        let mut params = Params::new();
        for s in &self.set {
            params.parse_assignment(s)?;
        }
        Ok(Some(RunConfig {
            verb,
            target: target.clone(),
            params,
            points: self.points,
            seed: self.seed,
            tol: self.tol,
            checks: self.checks.clone(),
            format: if self.json { Format::Json } else { Format::Human },
            i0: self.i0,
            kernel: self.kernel,
        }))
    }
}

fn catalog_text(name: Option<&str>, json: bool) -> Result<String> {
    let entries = match name {
        Some(n) => vec![entry(n)?],
        None => list_catalog(),
    };
    if json {
        return Ok(serde_json::to_string_pretty(&entries).expect("catalog serializes"));
    }
    let mut out = String::new();
    for e in entries {
        let dim = e.dim.map_or("n".to_string(), |d| d.to_string());
        out += &format!("{:<8} dim {:<2} {}\n", e.name, dim, e.summary);
        for p in &e.params {
            out += &format!("    {:<3} {}\n", p.name, p.doc);
        }
        for r in &e.relations {
            out += &format!("    relation: {}\n", r.text);
        }
    }
    Ok(out)
}

/// Parse arguments, run, print, and return the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if let Command::Catalog { name } = &cli.command {
        return match catalog_text(name.as_deref(), cli.json) {
            Ok(text) => {
                print!("{text}");
                if !text.ends_with('\n') {
                    println!();
                }
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        };
    }
    let result = cli.run_config().and_then(|rc| run_check(rc.as_ref().expect("not catalog")));
    match &result {
        Ok(report) if cli.json => println!("{}", report.to_json()),
        Ok(report) => print!("{}", report.human()),
        Err(e) => eprintln!("error: {e}"),
    }
    exit_status(&result)
}
