//! JSON job descriptions and reports, shared by the command-line tool and
//! the C interface.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;
use crate::hyperelliptic::{divisor_from_points, CurvePoint, HyperellipticCurve, MumfordDivisor};
use crate::isogeny::{
    compute_multiplication, compute_supplied, verify_representation, DegreeBounds, Fraction, IsogenyOutcome,
    IsogenyProblem, PipelineOptions, RationalRepresentation,
};
use crate::linalg::SeriesVector;
use crate::ode::{
    diff_solve_with, naive_solve, random_generic_problem, required_precision, GenericSeriesH, OdeProblem, Schedule,
};
use crate::pade::pade_reconstruct;
use crate::padic::{Elem, PadicContext};
use crate::poly::Poly;
use crate::series::TruncSeries;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_MATH: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    SolveOde,
    MultEll,
    Isogeny,
    Verify,
    Bench,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::SolveOde => "solve-ode",
            Command::MultEll => "mult-ell",
            Command::Isogeny => "isogeny",
            Command::Verify => "verify",
            Command::Bench => "bench",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleName {
    Doubling,
    Halving,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub x: String,
    pub y: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorJson {
    pub u: Vec<String>,
    pub v: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FractionJson {
    pub numerator: Vec<String>,
    pub denominator: Vec<String>,
    #[serde(default = "yes")]
    pub certified: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationJson {
    pub image_degree: usize,
    pub sigma: Vec<FractionJson>,
    pub rho_over_v: Vec<FractionJson>,
}

fn one() -> u32 {
    1
}

/// A job. Which fields are required depends on the command; see
/// `docs/schema.md`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: Option<Command>,
    pub comment: Option<String>,
    pub p: Option<u64>,
    #[serde(default = "one")]
    pub digits: u32,
    pub order: Option<usize>,
    pub precision: Option<u32>,
    pub ell: Option<u64>,
    pub genus: Option<usize>,
    pub curve: Option<Vec<String>>,
    pub codomain: Option<Vec<String>>,
    pub normalization: Option<Vec<Vec<String>>>,
    pub base_point: Option<PointJson>,
    pub initial_points: Option<Vec<PointJson>>,
    pub initial_divisor: Option<DivisorJson>,
    pub h: Option<Vec<Vec<Vec<String>>>>,
    pub rhs: Option<Vec<Vec<String>>>,
    pub representation: Option<RepresentationJson>,
    pub schedule: Option<ScheduleName>,
    pub fast_gcd: Option<bool>,
    pub check_naive: Option<bool>,
    pub trials: Option<usize>,
    pub sizes: Option<Vec<usize>>,
    pub pade_sizes: Option<Vec<usize>>,
    #[serde(default)]
    pub seed: u64,
}

/// Command-line overrides applied on top of a config.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub command: Option<Command>,
    pub seed: Option<u64>,
    pub order: Option<usize>,
    pub precision: Option<u32>,
    pub fast_gcd: Option<bool>,
}

#[derive(Debug)]
enum JobError {
    Schema(String),
    Math(Error),
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        JobError::Math(e)
    }
}

type JobResult<T> = std::result::Result<T, JobError>;

fn schema<T>(msg: impl Into<String>) -> JobResult<T> {
    Err(JobError::Schema(msg.into()))
}

fn need<'a, T>(v: &'a Option<T>, name: &str, cmd: Command) -> JobResult<&'a T> {
    v.as_ref()
        .ok_or_else(|| JobError::Schema(format!("`{name}` is required for {}", cmd.name())))
}

fn parse_elem(ctx: &PadicContext, s: &str) -> JobResult<Elem> {
    ctx.parse_integer(s)
        .map(|v| ctx.from_u64(v))
        .map_err(|_| JobError::Schema(format!("not a base-10 integer: {s:?}")))
}

fn parse_elems(ctx: &PadicContext, v: &[String]) -> JobResult<Vec<Elem>> {
    v.iter().map(|s| parse_elem(ctx, s)).collect()
}

fn parse_poly(ctx: &Arc<PadicContext>, v: &[String]) -> JobResult<Poly> {
    Ok(Poly::new(ctx, parse_elems(ctx, v)?))
}

fn parse_point(ctx: &PadicContext, p: &PointJson) -> JobResult<CurvePoint> {
    Ok(CurvePoint::Affine {
        x: parse_elem(ctx, &p.x)?,
        y: parse_elem(ctx, &p.y)?,
    })
}

fn point_json(ctx: &PadicContext, q: &CurvePoint) -> Value {
    match q {
        CurvePoint::Infinity => json!("infinity"),
        CurvePoint::Affine { x, y } => json!({"x": ctx.format(x), "y": ctx.format(y)}),
    }
}

fn fraction_json(f: &Fraction) -> FractionJson {
    FractionJson {
        numerator: f.numerator.to_strings(),
        denominator: f.denominator.to_strings(),
        certified: f.certified,
    }
}

pub fn representation_json(rep: &RationalRepresentation) -> RepresentationJson {
    RepresentationJson {
        image_degree: rep.image_degree,
        sigma: rep.sigma.iter().map(fraction_json).collect(),
        rho_over_v: rep.rho_over_v.iter().map(fraction_json).collect(),
    }
}

fn parse_representation(fp: &Arc<PadicContext>, r: &RepresentationJson) -> JobResult<RationalRepresentation> {
    let conv = |f: &FractionJson| -> JobResult<Fraction> {
        let den = parse_poly(fp, &f.denominator)?;
        if den.is_zero() {
            return schema("a denominator is zero");
        }
        Ok(Fraction {
            numerator: parse_poly(fp, &f.numerator)?,
            denominator: den,
            certified: f.certified,
        })
    };
    if r.sigma.len() != r.image_degree || r.rho_over_v.len() != r.image_degree {
        return schema("representation needs image_degree entries in sigma and rho_over_v");
    }
    Ok(RationalRepresentation {
        image_degree: r.image_degree,
        sigma: r.sigma.iter().map(conv).collect::<JobResult<_>>()?,
        rho_over_v: r.rho_over_v.iter().map(conv).collect::<JobResult<_>>()?,
    })
}

fn bounds_json(b: &DegreeBounds) -> Value {
    json!({"ell_eff": b.ell_eff, "sigma": b.sigma, "rho_over_v": b.rho, "order": b.order})
}

fn schedule_of(cfg: &JobConfig) -> Schedule {
    match cfg.schedule {
        Some(ScheduleName::Halving) => Schedule::Halving,
        _ => Schedule::Doubling,
    }
}

fn schedule_name(s: Schedule) -> &'static str {
    match s {
        Schedule::Doubling => "doubling",
        Schedule::Halving => "halving",
    }
}

fn series_json(s: &TruncSeries) -> Vec<String> {
    s.to_strings()
}

/// Everything a run produces; timings are kept apart so the rest is
/// reproducible byte for byte.
struct Report {
    parameters: Value,
    outputs: Value,
    verification: Value,
    timings: BTreeMap<String, f64>,
}

fn options(cfg: &JobConfig) -> PipelineOptions {
    PipelineOptions {
        order: cfg.order,
        precision: cfg.precision,
        target_digits: cfg.digits,
        fast_gcd: cfg.fast_gcd.unwrap_or(true),
        schedule: schedule_of(cfg),
    }
}

fn solve_ode(cfg: &JobConfig) -> JobResult<Report> {
    let cmd = Command::SolveOde;
    let p = *need(&cfg.p, "p", cmd)?;
    let n = *need(&cfg.order, "order", cmd)?;
    let h = need(&cfg.h, "h", cmd)?;
    let rhs = need(&cfg.rhs, "rhs", cmd)?;
    let g = h.len();
    if g == 0 || h.iter().any(|row| row.len() != g) || rhs.len() != g {
        return schema("`h` must be a square matrix and `rhs` must have one series per row");
    }
    let m = cfg.precision.unwrap_or_else(|| required_precision(p, cfg.digits, n));
    let ctx = PadicContext::new(p, m)?;
    let entries = h
        .iter()
        .flatten()
        .map(|f| parse_poly(&ctx, f))
        .collect::<JobResult<Vec<_>>>()?;
    let gser = rhs
        .iter()
        .map(|c| {
            let mut coeffs = parse_elems(&ctx, c)?;
            coeffs.resize(n.max(coeffs.len()), Elem::ZERO);
            Ok(TruncSeries::new(&ctx, coeffs))
        })
        .collect::<JobResult<Vec<_>>>()?;
    let hmat = GenericSeriesH::new(&ctx, g, entries)?;
    let prob = OdeProblem::new(Box::new(hmat), SeriesVector::new(&ctx, gser)?, n, cfg.digits)?;
    let schedule = schedule_of(cfg);
    let mut timings = BTreeMap::new();
    let start = Instant::now();
    let sol = diff_solve_with(&prob, schedule)?;
    timings.insert("solve".into(), start.elapsed().as_secs_f64());
    let xs: Vec<Vec<String>> = sol.x.entries().iter().map(series_json).collect();
    let mut outputs = json!({"x": xs});
    if cfg.check_naive.unwrap_or(false) {
        let start = Instant::now();
        let naive = naive_solve(&prob)?;
        timings.insert("naive".into(), start.elapsed().as_secs_f64());
        let pn = PadicContext::new(p, cfg.digits)?;
        let agree = sol
            .x
            .entries()
            .iter()
            .zip(naive.entries())
            .all(|(a, b)| a.to_context(&pn).ok() == b.to_context(&pn).ok());
        outputs["naive_agrees"] = json!(agree);
    }
    Ok(Report {
        parameters: json!({
            "p": p, "digits": cfg.digits, "order": n, "precision": m,
            "required_precision": required_precision(p, cfg.digits, n),
            "dimension": g, "schedule": schedule_name(schedule),
        }),
        outputs,
        verification: Value::Null,
        timings,
    })
}

fn outcome_parameters(cfg: &JobConfig, out: &IsogenyOutcome, p: u64, ell: u64, g: usize) -> Value {
    let mut params = json!({
        "p": p, "digits": cfg.digits, "ell": ell, "genus": g,
        "fast_gcd": cfg.fast_gcd.unwrap_or(true),
        "schedule": schedule_name(schedule_of(cfg)),
        "attempts": out.attempts,
        "image_degree": out.representation.image_degree,
    });
    match &out.problem {
        None => params["path"] = json!("closed-form"),
        Some(prob) => {
            let ctx = prob.context();
            params["path"] = json!("differential-system");
            params["order"] = json!(prob.order);
            params["precision"] = json!(ctx.precision());
            params["required_precision"] = json!(prob.required_precision());
            params["bounds"] = bounds_json(&prob.bounds);
            params["base_point"] = point_json(ctx, &prob.base);
            params["initial_divisor"] = json!({
                "u": prob.initial_divisor.u().to_strings(),
                "v": prob.initial_divisor.v().to_strings(),
            });
            if let Some(s) = &out.series {
                params["extension_modulus"] = json!(s.ctx.ext_modulus());
            }
        }
    }
    params
}

fn timings_of(out: &IsogenyOutcome) -> BTreeMap<String, f64> {
    out.timings.iter().cloned().collect()
}

fn mult_ell(cfg: &JobConfig) -> JobResult<Report> {
    let cmd = Command::MultEll;
    let p = *need(&cfg.p, "p", cmd)?;
    let ell = *need(&cfg.ell, "ell", cmd)?;
    let fp = PadicContext::new(p, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let curve = match (&cfg.curve, cfg.genus) {
        (Some(f), _) => HyperellipticCurve::new(parse_poly(&fp, f)?)?,
        (None, Some(g)) => HyperellipticCurve::random(&fp, g, &mut rng)?,
        (None, None) => return schema("mult-ell needs `curve` or `genus`"),
    };
    if cfg.curve.is_some() && cfg.genus.is_some_and(|g| g != curve.genus()) {
        return schema("`genus` does not match `curve`");
    }
    let base = cfg.base_point.as_ref().map(|q| parse_point(&fp, q)).transpose()?;
    let out = compute_multiplication(&curve, ell, base, &options(cfg), &mut rng)?;
    let mut timings = timings_of(&out);
    let trials = cfg.trials.unwrap_or(20);
    let verification = if trials > 0 {
        let start = Instant::now();
        let report = verify_representation(&out.representation, &curve, ell, trials, &mut rng)?;
        timings.insert("verify".into(), start.elapsed().as_secs_f64());
        verify_json(&report)
    } else {
        Value::Null
    };
    let mut parameters = outcome_parameters(cfg, &out, p, ell, curve.genus());
    parameters["curve"] = json!(curve.f().to_strings());
    Ok(Report {
        parameters,
        outputs: json!({"representation": representation_json(&out.representation)}),
        verification,
        timings,
    })
}

fn verify_json(r: &crate::isogeny::VerifyReport) -> Value {
    json!({
        "trials": r.trials, "passed": r.passed, "failed": r.failed, "skipped": r.skipped,
        "field_size": r.field_size, "all_passed": r.all_passed(),
        "first_counterexample": r.first_counterexample,
    })
}

fn isogeny(cfg: &JobConfig) -> JobResult<Report> {
    let cmd = Command::Isogeny;
    let p = *need(&cfg.p, "p", cmd)?;
    let ell = *need(&cfg.ell, "ell", cmd)?;
    let f1 = need(&cfg.curve, "curve", cmd)?;
    let f2 = need(&cfg.codomain, "codomain", cmd)?;
    let norm = need(&cfg.normalization, "normalization", cmd)?;
    let base = need(&cfg.base_point, "base_point", cmd)?;
    // the order decides the precision, which every datum is parsed at
    let fp = PadicContext::new(p, 1)?;
    let probe = HyperellipticCurve::new(parse_poly(&fp, f1)?)?;
    let g = probe.genus();
    let order = cfg
        .order
        .unwrap_or_else(|| crate::isogeny::degree_bounds(false, g, ell, f2.len().saturating_sub(1)).order);
    let m = cfg
        .precision
        .unwrap_or_else(|| required_precision(p, cfg.digits, order));
    let ctx = PadicContext::new(p, m)?;
    let domain = HyperellipticCurve::new(parse_poly(&ctx, f1)?)?;
    let codomain = HyperellipticCurve::new(parse_poly(&ctx, f2)?)?;
    if norm.len() != g || norm.iter().any(|r| r.len() != g) {
        return schema(format!("`normalization` must be {g} x {g}"));
    }
    let normalization = norm
        .iter()
        .flatten()
        .map(|s| parse_elem(&ctx, s))
        .collect::<JobResult<Vec<_>>>()?;
    let divisor = match (&cfg.initial_divisor, &cfg.initial_points) {
        (Some(d), None) => MumfordDivisor::new(&codomain, parse_poly(&ctx, &d.u)?, parse_poly(&ctx, &d.v)?)?,
        (None, Some(pts)) => {
            let pts = pts
                .iter()
                .map(|q| parse_point(&ctx, q))
                .collect::<JobResult<Vec<_>>>()?;
            divisor_from_points(&codomain, &pts)?
        }
        _ => return schema("isogeny needs exactly one of `initial_divisor` and `initial_points`"),
    };
    let base = parse_point(&ctx, base)?;
    let prob = IsogenyProblem::supplied(
        domain,
        codomain,
        normalization,
        base,
        divisor,
        ell,
        Some(order),
        cfg.digits,
    )?;
    let out = compute_supplied(prob, &options(cfg))?;
    let series = out.series.as_ref().expect("supplied runs solve the system");
    let outputs = json!({
        "series": {
            "x": series.xs.iter().map(series_json).collect::<Vec<_>>(),
            "y": series.ys.iter().map(series_json).collect::<Vec<_>>(),
        },
        "representation": representation_json(&out.representation),
    });
    Ok(Report {
        parameters: outcome_parameters(cfg, &out, p, ell, g),
        outputs,
        verification: Value::Null,
        timings: timings_of(&out),
    })
}

fn verify(cfg: &JobConfig) -> JobResult<Report> {
    let cmd = Command::Verify;
    let p = *need(&cfg.p, "p", cmd)?;
    let ell = *need(&cfg.ell, "ell", cmd)?;
    let fp = PadicContext::new(p, 1)?;
    let curve = HyperellipticCurve::new(parse_poly(&fp, need(&cfg.curve, "curve", cmd)?)?)?;
    let rep = parse_representation(&fp, need(&cfg.representation, "representation", cmd)?)?;
    let trials = cfg.trials.unwrap_or(50);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let start = Instant::now();
    let report = verify_representation(&rep, &curve, ell, trials, &mut rng)?;
    let mut timings = BTreeMap::new();
    timings.insert("verify".into(), start.elapsed().as_secs_f64());
    Ok(Report {
        parameters: json!({"p": p, "ell": ell, "genus": curve.genus(), "trials": trials}),
        outputs: json!({}),
        verification: verify_json(&report),
        timings,
    })
}

fn bench(cfg: &JobConfig) -> JobResult<Report> {
    let p = cfg.p.unwrap_or(7);
    let g = cfg.genus.unwrap_or(2);
    let sizes = cfg.sizes.clone().unwrap_or_else(|| vec![256, 512, 1024, 2048]);
    let pade_sizes = cfg.pade_sizes.clone().unwrap_or_else(|| vec![1024, 2048, 4096]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut timings = BTreeMap::new();
    for &n in &sizes {
        let m = required_precision(p, cfg.digits, n);
        let ctx = PadicContext::new(p, m)?;
        let (prob, _) = random_generic_problem(&ctx, g, n, cfg.digits, 3, &mut rng)?;
        let start = Instant::now();
        diff_solve_with(&prob, schedule_of(cfg))?;
        timings.insert(format!("solve_n{n:06}"), start.elapsed().as_secs_f64());
    }
    let fp = PadicContext::new(p, 1)?;
    for &n in &pade_sizes {
        let s: Vec<Elem> = (0..n).map(|_| fp.random(&mut rng)).collect();
        let b = n.saturating_sub(1) / 2;
        for (name, fast) in [("half_gcd", true), ("euclid", false)] {
            let start = Instant::now();
            // a random series may have no approximant with D(0) != 0
            let _ = pade_reconstruct(&fp, &s, b, b, fast);
            timings.insert(format!("pade_{name}_n{n:06}"), start.elapsed().as_secs_f64());
        }
    }
    Ok(Report {
        parameters: json!({
            "p": p, "genus": g, "digits": cfg.digits, "sizes": sizes, "pade_sizes": pade_sizes,
            "schedule": schedule_name(schedule_of(cfg)),
        }),
        outputs: json!({}),
        verification: Value::Null,
        timings,
    })
}

/// Parse a config, apply overrides, run it. Returns the exit code and the
/// report; never panics.
pub fn run_job_str(config: &str, overrides: &Overrides) -> (i32, Value) {
    match serde_json::from_str::<JobConfig>(config) {
        Ok(cfg) => run_job(cfg, overrides),
        Err(e) => (EXIT_SCHEMA, error_report(None, "SchemaError", &e.to_string(), 0)),
    }
}

fn error_report(cmd: Option<Command>, kind: &str, message: &str, seed: u64) -> Value {
    json!({
        "command": cmd.map(|c| c.name()),
        "seed": seed,
        "status": "error",
        "error": {"kind": kind, "message": message},
    })
}

pub fn run_job(mut cfg: JobConfig, overrides: &Overrides) -> (i32, Value) {
    if let Some(s) = overrides.seed {
        cfg.seed = s;
    }
    if overrides.order.is_some() {
        cfg.order = overrides.order;
    }
    if overrides.precision.is_some() {
        cfg.precision = overrides.precision;
    }
    if overrides.fast_gcd.is_some() {
        cfg.fast_gcd = overrides.fast_gcd;
    }
    let cmd = match overrides.command.or(cfg.command) {
        Some(c) => c,
        None => {
            return (
                EXIT_SCHEMA,
                error_report(None, "SchemaError", "no command given", cfg.seed),
            )
        }
    };
    if cfg.digits == 0 {
        return (
            EXIT_SCHEMA,
            error_report(Some(cmd), "SchemaError", "`digits` must be positive", cfg.seed),
        );
    }
    let result = catch_unwind(AssertUnwindSafe(|| match cmd {
        Command::SolveOde => solve_ode(&cfg),
        Command::MultEll => mult_ell(&cfg),
        Command::Isogeny => isogeny(&cfg),
        Command::Verify => verify(&cfg),
        Command::Bench => bench(&cfg),
    }));
    match result {
        Ok(Ok(r)) => (
            EXIT_OK,
            json!({
                "command": cmd.name(),
                "seed": cfg.seed,
                "status": "ok",
                "parameters": r.parameters,
                "outputs": r.outputs,
                "verification": r.verification,
                "timings": r.timings,
            }),
        ),
        Ok(Err(JobError::Schema(msg))) => (EXIT_SCHEMA, error_report(Some(cmd), "SchemaError", &msg, cfg.seed)),
        Ok(Err(JobError::Math(e))) => (EXIT_MATH, error_report(Some(cmd), e.kind(), &e.to_string(), cfg.seed)),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "internal error".into());
            (EXIT_INTERNAL, error_report(Some(cmd), "InternalError", &msg, cfg.seed))
        }
    }
}

/// One-paragraph human summary of a report.
pub fn summary(report: &Value) -> String {
    let cmd = report["command"].as_str().unwrap_or("?");
    if report["status"] == "error" {
        return format!(
            "{cmd}: {} ({})",
            report["error"]["kind"].as_str().unwrap_or("?"),
            report["error"]["message"].as_str().unwrap_or("")
        );
    }
    let mut out = format!("{cmd}: ok");
    let params = &report["parameters"];
    for key in ["p", "genus", "ell", "order", "precision", "path"] {
        if !params[key].is_null() {
            out.push_str(&format!(", {key} = {}", params[key]));
        }
    }
    let v = &report["verification"];
    if !v.is_null() {
        out.push_str(&format!(", verification {}/{} passed", v["passed"], v["trials"]));
    }
    if let Some(t) = report["timings"].as_object() {
        let total: f64 = t.values().filter_map(|x| x.as_f64()).sum();
        out.push_str(&format!(", {total:.3} s"));
    }
    out
}

/// [`run_job_str`] with the report rendered as pretty JSON.
pub fn run_job_to_string(config: &str, overrides: &Overrides) -> (i32, String) {
    let (code, report) = run_job_str(config, overrides);
    (code, serde_json::to_string_pretty(&report).expect("reports serialize"))
}
