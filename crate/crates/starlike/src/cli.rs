//! Command-line surface: bound calculators, single checks, sweeps,
//! falsification runs, and the integral transform.
//!
//! Exit codes are a total function of the outcome: 0 for success
//! (verify: PASS or BOUNDARY), 1 for parse and I/O errors, 2 for gate
//! violations outside any verdict, 3 for FAIL, 4 for HYPOTHESIS_NOT_MET.
//! All outputs are deterministic given the same config and seed.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::builtin::{extremal_p, halfplane, koebe, one_term};
use crate::criteria::{
    lambda1_bound, lambda_max_starlike, thm2_deviation, thm2_order, thm3_lambdas, AlphaRegime,
    CriterionParams, GATE_SLACK,
};
use crate::harness::{
    falsify_search, is_gate_error, verify_lemma21, verify_lemma22_part1, verify_lemma22_part2,
    verify_theorem1, verify_theorem2, verify_theorem3, CriterionId, FalsifyOutcome, FamilySpec,
    Tolerances, Verdict, VerificationReport,
};
use crate::report::{csv_cell, jsonl_line, write_lines, RunConfig};
use crate::series::{AnMember, H1nMember, PowerSeries};
use crate::transform::{bernardi_transform, transform_identity_residual, TransformSpec};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_GATE: i32 = 2;
pub const EXIT_FAIL: i32 = 3;
pub const EXIT_NOT_MET: i32 = 4;

/// Parses a single-token complex literal: `0.5`, `0.5+0.3i`, `-0.3i`,
/// `i`, `1e-3+2e-4i`. The imaginary part is optional.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim();
    let bad = || Error::InvalidParameter(format!("cannot parse complex number from {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not a leading sign or an exponent
    // sign; everything after it is the imaginary part.
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in 1..bytes.len() {
        if (bytes[idx] == b'+' || bytes[idx] == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
        }
    }
    let (re_str, im_str) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("", body),
    };
    let re = if re_str.is_empty() {
        0.0
    } else {
        re_str.parse::<f64>().map_err(|_| bad())?
    };
    let im = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_complex_cli(s: &str) -> std::result::Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

/// Sweep axis: either one complex literal or an inclusive real range
/// `start:stop:count`.
fn parse_axis(s: &str) -> Result<Vec<Complex64>> {
    if !s.contains(':') {
        return Ok(vec![parse_complex(s)?]);
    }
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidParameter(format!(
            "range must be start:stop:count, got {s:?}"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad range start {:?}", parts[0])))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad range stop {:?}", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad range count {:?}", parts[2])))?;
    if count == 0 {
        return Err(Error::InvalidParameter("range count must be positive".into()));
    }
    if count == 1 {
        return Ok(vec![Complex64::new(start, 0.0)]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count)
        .map(|k| Complex64::new(start + step * k as f64, 0.0))
        .collect())
}

#[derive(Parser, Debug)]
#[command(
    name = "starlike",
    about = "Numerical verification of subordination-based starlikeness criteria",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form bounds and gate checks for (n, mu, lambda[, c])
    Bounds(BoundsArgs),
    /// Check one criterion on one explicit configuration
    Verify(VerifyArgs),
    /// CSV sweep of the bound calculators over a (mu, lambda) grid
    Sweep(SweepArgs),
    /// Seeded randomized falsification run
    Falsify(FalsifyArgs),
    /// Apply the integral transform and report the identity residual
    Transform(TransformArgs),
}

#[derive(Args, Debug, Clone)]
struct CommonOpts {
    /// Truncation order N
    #[arg(long)]
    order: Option<usize>,
    /// Comma-separated radius ladder, e.g. 0.9,0.99,0.999
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Angular samples per circle
    #[arg(long)]
    angles: Option<usize>,
    /// Base seed for randomized draws
    #[arg(long)]
    seed: Option<u64>,
    /// Trial count for falsification runs
    #[arg(long)]
    trials: Option<usize>,
    /// Conclusion violation tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// JSON config file; explicit flags override file values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file path
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonOpts {
    /// Precedence: flags > config file > defaults.
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.order {
            cfg.order = v;
        }
        if let Some(v) = &self.radii {
            cfg.radii = v.clone();
        }
        if let Some(v) = self.angles {
            cfg.angles = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.trials {
            cfg.trials = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn tolerances(cfg: &RunConfig) -> Tolerances {
        Tolerances {
            conclusion_tol: cfg.tol,
            boundary_band: cfg.hypothesis_band,
        }
    }
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, value_parser = parse_complex_cli)]
    mu: Complex64,
    #[arg(long, value_parser = parse_complex_cli)]
    lambda: Complex64,
    #[arg(long, value_parser = parse_complex_cli)]
    c: Option<Complex64>,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Criterion: lemma21, lemma22p1, lemma22p2, thm1, thm2, thm3
    theorem_id: String,
    /// Function source: builtin:identity|koebe|halfplane, one_term:a,
    /// extremal (lemma21), or a path to coefficient JSON
    #[arg(long)]
    f: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, value_parser = parse_complex_cli)]
    mu: Complex64,
    #[arg(long, value_parser = parse_complex_cli)]
    lambda: Complex64,
    #[arg(long, value_parser = parse_complex_cli)]
    c: Option<Complex64>,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Complex literal or real range start:stop:count
    #[arg(long)]
    mu: String,
    /// Complex literal or real range start:stop:count
    #[arg(long)]
    lambda: String,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args, Debug)]
struct FalsifyArgs {
    /// Criterion: lemma21, lemma22p1, lemma22p2, thm1, thm2, thm3
    theorem_id: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, value_parser = parse_complex_cli)]
    mu: Complex64,
    #[arg(long, value_parser = parse_complex_cli)]
    lambda: Complex64,
    #[arg(long, value_parser = parse_complex_cli)]
    c: Option<Complex64>,
    /// Coefficient budget of the random family; default is calibrated
    /// gate-interior from (n, mu, lambda)
    #[arg(long)]
    budget: Option<f64>,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args, Debug)]
struct TransformArgs {
    /// Function source, as for verify
    #[arg(long)]
    f: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, value_parser = parse_complex_cli)]
    mu: Complex64,
    #[arg(long, value_parser = parse_complex_cli)]
    c: Complex64,
    #[command(flatten)]
    common: CommonOpts,
}

/// Parsed --f value.
enum FunctionSource {
    Identity,
    Koebe,
    Halfplane,
    OneTerm(Complex64),
    Extremal,
    Path(PathBuf),
}

fn parse_source(s: &str) -> Result<FunctionSource> {
    let body = s.strip_prefix("builtin:").unwrap_or(s);
    match body {
        "identity" => Ok(FunctionSource::Identity),
        "koebe" => Ok(FunctionSource::Koebe),
        "halfplane" => Ok(FunctionSource::Halfplane),
        "extremal" => Ok(FunctionSource::Extremal),
        other => {
            if let Some(a) = other.strip_prefix("one_term:") {
                Ok(FunctionSource::OneTerm(parse_complex(a)?))
            } else {
                Ok(FunctionSource::Path(PathBuf::from(s)))
            }
        }
    }
}

fn read_coefficients(path: &Path, value: &serde_json::Value) -> Result<PowerSeries> {
    let arr = value.as_array().ok_or_else(|| {
        Error::InvalidParameter(format!(
            "{}: expected a JSON array of [re, im] pairs",
            path.display()
        ))
    })?;
    let mut coeffs = Vec::with_capacity(arr.len());
    for item in arr {
        let pair: [f64; 2] = serde_json::from_value(item.clone())
            .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
        coeffs.push(Complex64::new(pair[0], pair[1]));
    }
    PowerSeries::new(coeffs)
}

fn read_series_file(path: &Path) -> Result<PowerSeries> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
    read_coefficients(path, &value)
}

/// Reads {"q": [...], "<key>": [...]} for the two-factor lemmas. An
/// optional "alpha" member overrides the calculator-derived affine
/// coefficient, which is how configurations outside the guaranteed
/// threshold are probed.
fn read_pair_file(path: &Path, key: &str) -> Result<(PowerSeries, PowerSeries, Option<f64>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
    let obj = value.as_object().ok_or_else(|| {
        Error::InvalidParameter(format!(
            "{}: expected an object with keys \"q\" and \"{key}\"",
            path.display()
        ))
    })?;
    let fetch = |k: &str| -> Result<PowerSeries> {
        let v = obj.get(k).ok_or_else(|| {
            Error::InvalidParameter(format!("{}: missing key \"{k}\"", path.display()))
        })?;
        read_coefficients(path, v)
    };
    let alpha = match obj.get("alpha") {
        Some(v) => Some(v.as_f64().ok_or_else(|| {
            Error::InvalidParameter(format!("{}: \"alpha\" must be a number", path.display()))
        })?),
        None => None,
    };
    Ok((fetch("q")?, fetch(key)?, alpha))
}

fn load_an(source: &str, n: usize, order: usize) -> Result<AnMember> {
    match parse_source(source)? {
        FunctionSource::Identity => AnMember::new(
            PowerSeries::monomial(Complex64::new(1.0, 0.0), 1, order),
            n,
        ),
        FunctionSource::Koebe => AnMember::new(koebe(order).series().clone(), n),
        FunctionSource::Halfplane => AnMember::new(halfplane(order).series().clone(), n),
        FunctionSource::OneTerm(a) => one_term(a, n, order),
        FunctionSource::Extremal => Err(Error::InvalidParameter(
            "extremal is a lemma21 source, not a function in A_n".into(),
        )),
        FunctionSource::Path(path) => {
            AnMember::new(read_series_file(&path)?.with_order(order), n)
        }
    }
}

fn load_h1n(
    source: &str,
    n: usize,
    mu: Complex64,
    lambda: Complex64,
    order: usize,
) -> Result<H1nMember> {
    match parse_source(source)? {
        FunctionSource::Extremal => extremal_p(lambda, mu, n, order),
        FunctionSource::Path(path) => {
            H1nMember::new(read_series_file(&path)?.with_order(order), n)
        }
        _ => Err(Error::InvalidParameter(format!(
            "lemma21 takes --f extremal or a coefficient JSON path, got {source:?}"
        ))),
    }
}

/// Everything `bounds` prints. Refinement bounds that fail their gates
/// come back absent, with the reason in `gate_messages`; `gates_ok`
/// means every requested bound was computed.
#[derive(Debug, Serialize)]
struct BoundsReport {
    n: usize,
    #[serde(with = "crate::report::c64_pair")]
    mu: Complex64,
    #[serde(with = "crate::report::c64_pair")]
    lambda: Complex64,
    #[serde(
        with = "crate::report::c64_pair_opt",
        skip_serializing_if = "Option::is_none"
    )]
    c: Option<Complex64>,
    lambda_abs: f64,
    lambda1: f64,
    lambda_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    regime: Option<AlphaRegime>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_boundary: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda1_transform: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda2_transform: Option<f64>,
    gates_ok: bool,
    gate_messages: Vec<String>,
}

fn cmd_bounds(args: BoundsArgs) -> Result<i32> {
    args.common.resolve()?;
    let l = args.lambda.norm();

    // Core chain: these gates decide the exit code. Refinements below
    // only annotate the report.
    let lambda1 = lambda1_bound(args.lambda, args.mu, args.n)?;
    let lambda_max = lambda_max_starlike(args.mu, args.n)?;
    if l > lambda_max + GATE_SLACK {
        return Err(Error::GateViolation(format!(
            "|lambda| = {l} exceeds lambda_max = {lambda_max}"
        )));
    }

    let mut messages = Vec::new();
    let mut report = BoundsReport {
        n: args.n,
        mu: args.mu,
        lambda: args.lambda,
        c: args.c,
        lambda_abs: l,
        lambda1,
        lambda_max,
        alpha: None,
        regime: None,
        alpha_boundary: None,
        deviation_bound: None,
        lambda1_transform: None,
        lambda2_transform: None,
        gates_ok: true,
        gate_messages: Vec::new(),
    };

    // Core gates hold, so CriterionParams cannot reject these values.
    let mut params = CriterionParams::new(args.n, args.mu, args.lambda)?;
    match thm2_order(&params) {
        Ok(a) => {
            report.alpha = Some(a.alpha);
            report.regime = Some(a.regime);
            report.alpha_boundary = Some(a.boundary);
        }
        Err(e) if is_gate_error(&e) => messages.push(format!("alpha: {e}")),
        Err(e) => return Err(e),
    }
    match thm2_deviation(&params) {
        Ok(b) => report.deviation_bound = Some(b),
        Err(e) if is_gate_error(&e) => messages.push(format!("deviation: {e}")),
        Err(e) => return Err(e),
    }
    if let Some(c) = args.c {
        // The transform chain was requested explicitly; its gates are
        // core for this invocation.
        params = params.with_c(c)?;
        let lambdas = thm3_lambdas(&params)?;
        report.lambda1_transform = Some(lambdas.lambda1_abs);
        report.lambda2_transform = Some(lambdas.lambda2_abs);
    }

    report.gates_ok = messages.is_empty();
    report.gate_messages = messages;
    let line = jsonl_line(&report)?;
    println!("{line}");
    if let Some(out) = &args.common.out {
        write_lines(out, &[line])?;
    }
    Ok(EXIT_OK)
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Pass | Verdict::Boundary => EXIT_OK,
        Verdict::Fail => EXIT_FAIL,
        Verdict::HypothesisNotMet => EXIT_NOT_MET,
    }
}

fn print_verdict(report: &VerificationReport) {
    let mut line = format!("{} {}", report.theorem_id, report.verdict);
    if let Some(msg) = &report.gate_message {
        line.push_str(&format!(" gate={msg:?}"));
    } else {
        line.push_str(&format!(
            " hypothesis_envelope_margin={}",
            report.hypothesis_envelope_margin
        ));
        if let Some(m) = report.conclusion_margin() {
            line.push_str(&format!(" conclusion_margin={m}"));
        }
    }
    println!("{line}");
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let id: CriterionId = args.theorem_id.parse()?;
    let cfg = args.common.resolve()?;
    let grid = cfg.grid()?;
    let tols = CommonOpts::tolerances(&cfg);

    // Configurations that cannot even be built because a chain gate
    // fails get the same verdict a built one would: HYPOTHESIS_NOT_MET.
    macro_rules! gate_or_exit {
        ($e:expr) => {
            match $e {
                Ok(v) => v,
                Err(e) if is_gate_error(&e) => {
                    println!("{id} HYPOTHESIS_NOT_MET gate={:?}", e.to_string());
                    return Ok(EXIT_NOT_MET);
                }
                Err(e) => return Err(e),
            }
        };
    }

    let report = match id {
        CriterionId::Lemma21 => {
            let p = gate_or_exit!(load_h1n(&args.f, args.n, args.mu, args.lambda, cfg.order));
            verify_lemma21(&p, args.mu, args.lambda, &grid, &tols)?
        }
        CriterionId::Lemma22Part1 => {
            let l = args.lambda.norm();
            let l1 = gate_or_exit!(lambda1_bound(args.lambda, args.mu, args.n));
            let (q_series, p_series, alpha_override) = match parse_source(&args.f)? {
                FunctionSource::Path(path) => read_pair_file(&path, "p")?,
                _ => {
                    return Err(Error::InvalidParameter(
                        "lemma22p1 takes --f <path to {\"q\": [...], \"p\": [...]}>".into(),
                    ))
                }
            };
            let alpha = match alpha_override {
                Some(a) => a,
                None => gate_or_exit!(crate::criteria::alpha_threshold(l, l1)).alpha,
            };
            let q = H1nMember::new(q_series.with_order(cfg.order), args.n)?;
            let p = H1nMember::new(p_series.with_order(cfg.order), args.n)?;
            verify_lemma22_part1(&q, &p, l, l1, alpha, &grid, &tols)?
        }
        CriterionId::Lemma22Part2 => {
            let l = args.lambda.norm();
            let l1 = gate_or_exit!(lambda1_bound(args.lambda, args.mu, args.n));
            let (q_series, w_series, _) = match parse_source(&args.f)? {
                FunctionSource::Path(path) => read_pair_file(&path, "w")?,
                _ => {
                    return Err(Error::InvalidParameter(
                        "lemma22p2 takes --f <path to {\"q\": [...], \"w\": [...]}>".into(),
                    ))
                }
            };
            let q = H1nMember::new(q_series.with_order(cfg.order), args.n)?;
            verify_lemma22_part2(&q, &w_series.with_order(cfg.order), l, l1, &grid, &tols)?
        }
        CriterionId::Theorem1 => {
            let f = load_an(&args.f, args.n, cfg.order)?;
            verify_theorem1(&f, args.mu, args.lambda, &grid, &tols)?
        }
        CriterionId::Theorem2 => {
            let f = load_an(&args.f, args.n, cfg.order)?;
            verify_theorem2(&f, args.mu, args.lambda, &grid, &tols)?
        }
        CriterionId::Theorem3 => {
            let c = args.c.ok_or_else(|| {
                Error::InvalidParameter("thm3 requires --c".into())
            })?;
            let f = load_an(&args.f, args.n, cfg.order)?;
            verify_theorem3(&f, args.mu, c, args.lambda, &grid, &tols)?
        }
    };

    print_verdict(&report);
    if let Some(out) = &args.common.out {
        write_lines(out, &[jsonl_line(&report)?])?;
    }
    Ok(verdict_exit(report.verdict))
}

pub const SWEEP_HEADER: &str = "n,re_mu,im_mu,lambda_abs,lambda1,alpha,regime,deviation_bound,gates_ok";

fn sweep_row(n: usize, mu: Complex64, lambda: Complex64) -> Result<String> {
    let mut lambda1 = None;
    let mut alpha = None;
    let mut regime = None;
    let mut deviation = None;
    match lambda1_bound(lambda, mu, n) {
        Ok(v) => lambda1 = Some(v),
        Err(e) if is_gate_error(&e) => {}
        Err(e) => return Err(e),
    }
    // A rejected parameter tuple (zero lambda on a grid edge) simply
    // leaves the refinement cells empty.
    if let Ok(params) = CriterionParams::new(n, mu, lambda) {
        match thm2_order(&params) {
            Ok(a) => {
                alpha = Some(a.alpha);
                regime = Some(a.regime);
            }
            Err(e) if is_gate_error(&e) => {}
            Err(e) => return Err(e),
        }
        match thm2_deviation(&params) {
            Ok(b) => deviation = Some(b),
            Err(e) if is_gate_error(&e) => {}
            Err(e) => return Err(e),
        }
    }
    let gates_ok = lambda1.is_some() && alpha.is_some() && deviation.is_some();
    Ok(format!(
        "{},{},{},{},{},{},{},{},{}",
        n,
        mu.re,
        mu.im,
        lambda.norm(),
        csv_cell(lambda1),
        csv_cell(alpha),
        regime.map(|r| r.to_string()).unwrap_or_default(),
        csv_cell(deviation),
        gates_ok
    ))
}

fn cmd_sweep(args: SweepArgs) -> Result<i32> {
    args.common.resolve()?;
    let mus = parse_axis(&args.mu)?;
    let lambdas = parse_axis(&args.lambda)?;
    let mut lines = Vec::with_capacity(mus.len() * lambdas.len() + 1);
    lines.push(SWEEP_HEADER.to_string());
    for &mu in &mus {
        for &lambda in &lambdas {
            lines.push(sweep_row(args.n, mu, lambda)?);
        }
    }
    match &args.common.out {
        Some(out) => write_lines(out, &lines)?,
        None => lines.iter().for_each(|l| println!("{l}")),
    }
    Ok(EXIT_OK)
}

pub const FALSIFY_SUMMARY_HEADER: &str = "theorem_id,trials,pass,boundary,fail,hypothesis_not_met,errors,seed,min_conclusion_margin,min_hypothesis_margin";

fn falsify_summary_row(outcome: &FalsifyOutcome) -> String {
    let s = &outcome.summary;
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        s.theorem_id,
        s.trials,
        s.pass,
        s.boundary,
        s.fail,
        s.hypothesis_not_met,
        s.errors,
        s.seed,
        csv_cell(s.min_conclusion_margin),
        csv_cell(s.min_hypothesis_margin)
    )
}

/// Gate-interior coefficient budget: sized so the leading criterion
/// coefficient (n - mu) a_{n+1} stays well inside |lambda|, and capped
/// at the family validator's limit.
fn default_budget(n: usize, mu: Complex64, lambda: Complex64) -> f64 {
    let nm = (Complex64::new(n as f64, 0.0) - mu).norm().max(1e-9);
    (0.4 * lambda.norm() / nm).clamp(1e-9, 0.45)
}

fn cmd_falsify(args: FalsifyArgs) -> Result<i32> {
    let id: CriterionId = args.theorem_id.parse()?;
    let cfg = args.common.resolve()?;
    let grid = cfg.grid()?;
    let tols = CommonOpts::tolerances(&cfg);

    let mut params = CriterionParams::new(args.n, args.mu, args.lambda)?;
    if let Some(c) = args.c {
        params = params.with_c(c)?;
    }
    let budget = args
        .budget
        .unwrap_or_else(|| default_budget(args.n, args.mu, args.lambda));
    let family = FamilySpec::new(args.n, budget, cfg.trials, cfg.seed)?;
    let outcome = falsify_search(&family, &params, id, Some(cfg.trials), cfg.order, &grid, &tols)?;

    let s = &outcome.summary;
    println!(
        "{} trials={} pass={} boundary={} fail={} hypothesis_not_met={} errors={} seed={}",
        s.theorem_id, s.trials, s.pass, s.boundary, s.fail, s.hypothesis_not_met, s.errors, s.seed
    );
    for rec in &outcome.closest {
        println!(
            "closest trial={} conclusion_margin={} verdict={}",
            rec.trial, rec.conclusion_margin, rec.verdict
        );
    }

    if let Some(out) = &args.common.out {
        let mut lines = Vec::with_capacity(outcome.flagged.len());
        for report in &outcome.flagged {
            lines.push(jsonl_line(report)?);
        }
        write_lines(out, &lines)?;
        let summary_path = PathBuf::from(format!("{}.summary.csv", out.display()));
        write_lines(
            &summary_path,
            &[FALSIFY_SUMMARY_HEADER.to_string(), falsify_summary_row(&outcome)],
        )?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct TransformOutput {
    n: usize,
    order: usize,
    #[serde(with = "crate::report::c64_pair")]
    mu: Complex64,
    #[serde(with = "crate::report::c64_pair")]
    c: Complex64,
    /// Coefficients of F as [re, im] pairs, index 0 first.
    coefficients: Vec<[f64; 2]>,
    residual: f64,
}

fn cmd_transform(args: TransformArgs) -> Result<i32> {
    let cfg = args.common.resolve()?;
    let f = load_an(&args.f, args.n, cfg.order)?;
    let spec = TransformSpec::new(args.mu, args.c, cfg.order)?;
    let transformed = bernardi_transform(&f, &spec)?;
    let residual = transform_identity_residual(&f, &spec)?;
    let output = TransformOutput {
        n: transformed.n(),
        order: transformed.order(),
        mu: args.mu,
        c: args.c,
        coefficients: transformed
            .series()
            .coeffs()
            .iter()
            .map(|z| [z.re, z.im])
            .collect(),
        residual,
    };
    let line = jsonl_line(&output)?;
    println!("{line}");
    if let Some(out) = &args.common.out {
        write_lines(out, &[line])?;
    }
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Bounds(args) => cmd_bounds(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Falsify(args) => cmd_falsify(args),
        Command::Transform(args) => cmd_transform(args),
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_PARSE,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) if is_gate_error(&e) => {
            eprintln!("error: {e}");
            EXIT_GATE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_PARSE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals_parse() {
        let cases = [
            ("0.5", 0.5, 0.0),
            ("-2", -2.0, 0.0),
            ("0.5+0.3i", 0.5, 0.3),
            ("0.5-0.3i", 0.5, -0.3),
            ("-0.5-0.3i", -0.5, -0.3),
            ("0.3i", 0.0, 0.3),
            ("-0.3i", 0.0, -0.3),
            ("i", 0.0, 1.0),
            ("-i", 0.0, -1.0),
            ("1e-3+2e-4i", 1e-3, 2e-4),
            ("2.5E2-1E-1i", 250.0, -0.1),
        ];
        for (text, re, im) in cases {
            let z = parse_complex(text).unwrap();
            assert_eq!((z.re, z.im), (re, im), "{text}");
        }
        for bad in ["", "abc", "1+2", "1i2", "+-3i", "1..2"] {
            assert!(parse_complex(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn axes_parse_as_single_values_or_ranges() {
        let single = parse_axis("0.25+0.1i").unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0], Complex64::new(0.25, 0.1));

        let range = parse_axis("0.1:0.5:5").unwrap();
        assert_eq!(range.len(), 5);
        assert!((range[0].re - 0.1).abs() < 1e-15);
        assert!((range[4].re - 0.5).abs() < 1e-15);
        assert!((range[2].re - 0.3).abs() < 1e-15);
        assert!(range.iter().all(|z| z.im == 0.0));

        assert!(parse_axis("0.1:0.5").is_err());
        assert!(parse_axis("0.1:0.5:0").is_err());
        assert_eq!(parse_axis("0.7:0.9:1").unwrap(), vec![Complex64::new(0.7, 0.0)]);
    }

    #[test]
    fn function_sources_parse() {
        assert!(matches!(parse_source("builtin:identity").unwrap(), FunctionSource::Identity));
        assert!(matches!(parse_source("identity").unwrap(), FunctionSource::Identity));
        assert!(matches!(parse_source("koebe").unwrap(), FunctionSource::Koebe));
        assert!(matches!(parse_source("extremal").unwrap(), FunctionSource::Extremal));
        match parse_source("one_term:0.05").unwrap() {
            FunctionSource::OneTerm(a) => assert_eq!(a, Complex64::new(0.05, 0.0)),
            _ => panic!("expected one_term"),
        }
        match parse_source("builtin:one_term:0.1+0.2i").unwrap() {
            FunctionSource::OneTerm(a) => assert_eq!(a, Complex64::new(0.1, 0.2)),
            _ => panic!("expected one_term"),
        }
        assert!(matches!(parse_source("series.json").unwrap(), FunctionSource::Path(_)));
        assert!(parse_source("one_term:junk").is_err());
    }

    #[test]
    fn sweep_rows_fill_and_blank_cells() {
        // Interior point: every column filled.
        let row = sweep_row(
            1,
            Complex64::new(0.25, 0.0),
            Complex64::new(0.5, 0.0),
        )
        .unwrap();
        assert!(row.ends_with("true"));
        assert!(row.contains("SUM_AT_MOST_ONE"));
        assert!(row.contains("0.8"));

        // Re(mu) >= n/2 empties the thm2 cells but keeps lambda1.
        let row = sweep_row(1, Complex64::new(0.6, 0.0), Complex64::new(0.5, 0.0)).unwrap();
        assert!(row.ends_with("false"));
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 9);
        assert!(!cells[4].is_empty(), "lambda1 still computable");
        assert!(cells[5].is_empty(), "alpha gated out");
        assert!(cells[6].is_empty(), "regime gated out");
        assert!(cells[7].is_empty(), "deviation gated out");
    }

    #[test]
    fn budget_default_is_gate_interior() {
        let b = default_budget(1, Complex64::new(0.25, 0.0), Complex64::new(0.4, 0.0));
        assert!((b - 0.4 * 0.4 / 0.75).abs() < 1e-15);
        // Near mu = n the cap keeps the family validator satisfied.
        let b = default_budget(1, Complex64::new(0.999999, 0.0), Complex64::new(0.5, 0.0));
        assert_eq!(b, 0.45);
    }
}
