//! Verification harness: single-configuration checks, randomized
//! falsification, and sharpness searches.
//!
//! Every check produces a [`VerificationReport`] with one of four
//! verdicts. The classification discipline: parameter gates and the
//! hypothesis subordination are screened first (HYPOTHESIS_NOT_MET),
//! conclusions are asserted only under gates that hold, and FAIL is
//! reserved for a conclusion violated beyond tolerance while the
//! hypothesis held with a strictly positive margin. Margins within the
//! boundary band of zero, on either side, read BOUNDARY.

mod family;
mod sharpness;

pub use family::{
    draw_hypothesis_member, draw_lemma21_p, draw_lemma22_part1, draw_lemma22_part2, draw_member,
    draw_schwarz_numerator, FamilySpec,
};
pub use sharpness::{
    sharpness_search, SharpnessConfig, SharpnessKind, SharpnessResult, EVAL_RADIUS,
};

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::criteria::{
    alpha_threshold, lambda1_bound, lambda_max_starlike, thm2_deviation, thm2_order, thm3_lambdas,
    w_bound, CriterionParams, GATE_SLACK,
};
use crate::disk::{
    inf_re, starlike_profile, subordinate_to_disk, sup_abs_deviation, RadialGrid,
    SubordinationCheck,
};
use crate::series::{AnMember, H1nMember, PowerSeries, CONSTANT_TERM_EPS};
use crate::transform::{bernardi_transform, transform_identity_residual, TransformSpec};
use crate::{Error, Result};

/// Ceiling on the coefficient identity residual of the transform; a
/// breach means the pipeline itself is broken, not the statement.
pub const TRANSFORM_RESIDUAL_CAP: f64 = 1e-9;

/// Catalogue identifier of a verifiable statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriterionId {
    /// Subordination transfer for p - z p'/mu.
    #[serde(rename = "lemma21")]
    Lemma21,
    /// Half-plane conclusion of the two-factor product lemma.
    #[serde(rename = "lemma22p1")]
    Lemma22Part1,
    /// Schwarz-bound conclusion of the two-factor product lemma.
    #[serde(rename = "lemma22p2")]
    Lemma22Part2,
    /// Starlikeness of f from the subordination criterion.
    #[serde(rename = "thm1")]
    Theorem1,
    /// Order and deviation bounds for f.
    #[serde(rename = "thm2")]
    Theorem2,
    /// Starlikeness, order and deviation of the integral transform.
    #[serde(rename = "thm3")]
    Theorem3,
}

impl CriterionId {
    pub const ALL: [CriterionId; 6] = [
        CriterionId::Lemma21,
        CriterionId::Lemma22Part1,
        CriterionId::Lemma22Part2,
        CriterionId::Theorem1,
        CriterionId::Theorem2,
        CriterionId::Theorem3,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CriterionId::Lemma21 => "lemma21",
            CriterionId::Lemma22Part1 => "lemma22p1",
            CriterionId::Lemma22Part2 => "lemma22p2",
            CriterionId::Theorem1 => "thm1",
            CriterionId::Theorem2 => "thm2",
            CriterionId::Theorem3 => "thm3",
        }
    }
}

impl std::fmt::Display for CriterionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

impl std::str::FromStr for CriterionId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lemma21" => Ok(CriterionId::Lemma21),
            "lemma22p1" => Ok(CriterionId::Lemma22Part1),
            "lemma22p2" => Ok(CriterionId::Lemma22Part2),
            "thm1" => Ok(CriterionId::Theorem1),
            "thm2" => Ok(CriterionId::Theorem2),
            "thm3" => Ok(CriterionId::Theorem3),
            other => Err(Error::InvalidParameter(format!(
                "unknown criterion id {other}"
            ))),
        }
    }
}

/// Verdict of one configuration check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "BOUNDARY")]
    Boundary,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "HYPOTHESIS_NOT_MET")]
    HypothesisNotMet,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Boundary => "BOUNDARY",
            Verdict::Fail => "FAIL",
            Verdict::HypothesisNotMet => "HYPOTHESIS_NOT_MET",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

/// Verdict thresholds. `boundary_band` brackets zero for both the
/// hypothesis and conclusion margins; `conclusion_tol` is how far past
/// zero a conclusion must land to count as a violation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    pub conclusion_tol: f64,
    pub boundary_band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            conclusion_tol: 1e-6,
            boundary_band: 1e-9,
        }
    }
}

/// Echo of the inputs behind a report. Function criteria fill mu and
/// lambda; the two-factor lemmas fill l, l1 and (for the half-plane
/// part) alpha.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamEcho {
    pub n: usize,
    #[serde(
        with = "crate::report::c64_pair_opt",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub mu: Option<Complex64>,
    #[serde(
        with = "crate::report::c64_pair_opt",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub lambda: Option<Complex64>,
    #[serde(
        with = "crate::report::c64_pair_opt",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub c: Option<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

impl ParamEcho {
    fn criterion(n: usize, mu: Complex64, lambda: Complex64, c: Option<Complex64>) -> Self {
        Self {
            n,
            mu: Some(mu),
            lambda: Some(lambda),
            c,
            l: None,
            l1: None,
            alpha: None,
        }
    }

    fn two_factor(n: usize, l: f64, l1: f64, alpha: Option<f64>) -> Self {
        Self {
            n,
            mu: None,
            lambda: None,
            c: None,
            l: Some(l),
            l1: Some(l1),
            alpha,
        }
    }
}

/// Outcome of one configuration check.
///
/// `hypothesis_margin` is |lambda| minus the sampled sup of the
/// hypothesis deviation; the envelope variant applies the per-radius
/// Schwarz envelope and is what the verdict reads. Margin fields are
/// meaningful only when `gates_ok` holds. Whenever a conclusion was
/// asserted, `conclusion_values` carries "conclusion_margin", the
/// minimum margin over the asserted conclusions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem_id: CriterionId,
    pub params: ParamEcho,
    pub verdict: Verdict,
    pub gates_ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate_message: Option<String>,
    pub hypothesis_margin: f64,
    pub hypothesis_envelope_margin: f64,
    pub conclusion_values: BTreeMap<String, f64>,
    /// False when a sampled sup decreased with the radius, which for
    /// analytic functions can only be a truncation artifact.
    pub ladder_monotone: bool,
    pub grid: RadialGrid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
    pub caveat: String,
}

impl VerificationReport {
    /// Minimum asserted conclusion margin, absent when gates blocked
    /// every conclusion.
    pub fn conclusion_margin(&self) -> Option<f64> {
        self.conclusion_values.get("conclusion_margin").copied()
    }
}

/// Maps margins to a verdict. The hypothesis margin is read against the
/// envelope: a hypothesis sitting on its boundary caps the verdict at
/// BOUNDARY, because a conclusion violation there cannot count as a
/// counterexample to the implication.
fn classify(hyp_envelope: f64, conclusion_min: f64, tols: &Tolerances) -> Verdict {
    if hyp_envelope < -tols.boundary_band {
        return Verdict::HypothesisNotMet;
    }
    let hyp_boundary = hyp_envelope <= tols.boundary_band;
    if conclusion_min < -tols.conclusion_tol {
        return if hyp_boundary {
            Verdict::Boundary
        } else {
            Verdict::Fail
        };
    }
    if hyp_boundary || conclusion_min <= tols.boundary_band {
        return Verdict::Boundary;
    }
    Verdict::Pass
}

fn caveat_line(order: usize, grid: &RadialGrid) -> String {
    format!(
        "sampled at series order {} on {} circles up to r = {} with {} angles; estimates, not proofs",
        order,
        grid.radii().len(),
        grid.outermost(),
        grid.angular_count()
    )
}

fn gate_report(
    id: CriterionId,
    params: ParamEcho,
    grid: &RadialGrid,
    order: usize,
    message: String,
    hyp: Option<&SubordinationCheck>,
) -> VerificationReport {
    VerificationReport {
        theorem_id: id,
        params,
        verdict: Verdict::HypothesisNotMet,
        gates_ok: false,
        gate_message: Some(message),
        hypothesis_margin: hyp.map(|h| h.margin).unwrap_or(0.0),
        hypothesis_envelope_margin: hyp.map(|h| h.envelope_margin).unwrap_or(0.0),
        conclusion_values: BTreeMap::new(),
        ladder_monotone: hyp.map(|h| h.ladder_monotone).unwrap_or(true),
        grid: grid.clone(),
        seed: None,
        trial: None,
        caveat: caveat_line(order, grid),
    }
}

/// Errors that demote a check to HYPOTHESIS_NOT_MET instead of aborting it.
pub fn is_gate_error(e: &Error) -> bool {
    matches!(
        e,
        Error::GateViolation(_) | Error::ZeroMu | Error::Resonance { .. }
    )
}

enum GateOr<T> {
    Value(T),
    Gate(String),
}

fn gate_or<T>(r: Result<T>) -> Result<GateOr<T>> {
    match r {
        Ok(v) => Ok(GateOr::Value(v)),
        Err(e) if is_gate_error(&e) => Ok(GateOr::Gate(e.to_string())),
        Err(e) => Err(e),
    }
}

/// Checks the subordination transfer: for p in H[1, n] with Re(mu) < n,
/// p - z p'/mu < 1 + lambda z forces p < 1 + lambda1 z.
pub fn verify_lemma21(
    p: &H1nMember,
    mu: Complex64,
    lambda: Complex64,
    grid: &RadialGrid,
    tols: &Tolerances,
) -> Result<VerificationReport> {
    let n = p.n();
    let order = p.series().order();
    let params = ParamEcho::criterion(n, mu, lambda, None);

    if mu.norm() <= GATE_SLACK {
        return Ok(gate_report(
            CriterionId::Lemma21,
            params,
            grid,
            order,
            Error::ZeroMu.to_string(),
            None,
        ));
    }
    let hyp_series = p.series().sub(
        &p.series()
            .derivative()
            .mul_z()
            .scale(Complex64::new(1.0, 0.0) / mu),
    );
    let hyp = subordinate_to_disk(&hyp_series, lambda, grid);

    let l1 = match gate_or(lambda1_bound(lambda, mu, n))? {
        GateOr::Value(v) => v,
        GateOr::Gate(m) => {
            return Ok(gate_report(
                CriterionId::Lemma21,
                params,
                grid,
                order,
                m,
                Some(&hyp),
            ))
        }
    };

    let conclusion = subordinate_to_disk(p.series(), Complex64::new(l1, 0.0), grid);
    let mut values = BTreeMap::new();
    values.insert("lambda1".into(), l1);
    values.insert("sup_p_deviation".into(), conclusion.sup.value);
    values.insert("conclusion_margin_raw".into(), conclusion.margin);
    values.insert("conclusion_margin".into(), conclusion.envelope_margin);

    Ok(VerificationReport {
        theorem_id: CriterionId::Lemma21,
        params,
        verdict: classify(hyp.envelope_margin, conclusion.envelope_margin, tols),
        gates_ok: true,
        gate_message: None,
        hypothesis_margin: hyp.margin,
        hypothesis_envelope_margin: hyp.envelope_margin,
        conclusion_values: values,
        ladder_monotone: hyp.ladder_monotone && conclusion.ladder_monotone,
        grid: grid.clone(),
        seed: None,
        trial: None,
        caveat: caveat_line(order, grid),
    })
}

/// Checks the half-plane conclusion of the product lemma: with
/// Q < 1 + l1 z and Q [alpha + (1 - alpha) p] < 1 + l z for Q, p in
/// H[1, n], the factor p keeps a positive real part. The subordination
/// of Q is treated as a gate: without it the implication is vacuous.
pub fn verify_lemma22_part1(
    q: &H1nMember,
    p: &H1nMember,
    l: f64,
    l1: f64,
    alpha: f64,
    grid: &RadialGrid,
    tols: &Tolerances,
) -> Result<VerificationReport> {
    if q.n() != p.n() {
        return Err(Error::InvalidParameter(
            "Q and p must share the membership index".into(),
        ));
    }
    if !alpha.is_finite() || !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} outside [0, 1)"
        )));
    }
    let n = q.n();
    let order = q.series().order().min(p.series().order());
    let params = ParamEcho::two_factor(n, l, l1, Some(alpha));
    let id = CriterionId::Lemma22Part1;

    if !(l > 0.0 && l <= 1.0 + GATE_SLACK) {
        let m = format!("L = {l} outside (0, 1]");
        return Ok(gate_report(id, params, grid, order, m, None));
    }
    if !(0.0..1.0).contains(&l1) {
        let m = format!("L1 = {l1} outside [0, 1)");
        return Ok(gate_report(id, params, grid, order, m, None));
    }

    let affine = p
        .series()
        .scale(Complex64::new(1.0 - alpha, 0.0))
        .add(&PowerSeries::constant(
            Complex64::new(alpha, 0.0),
            p.series().order(),
        ));
    let product = q.series().mul(&affine);
    let hyp = subordinate_to_disk(&product, Complex64::new(l, 0.0), grid);
    let precondition = subordinate_to_disk(q.series(), Complex64::new(l1, 0.0), grid);
    if precondition.envelope_margin < -tols.boundary_band {
        let m = format!(
            "Q escapes the disk 1 + L1 z by {:.3e}",
            -precondition.envelope_margin
        );
        return Ok(gate_report(id, params, grid, order, m, Some(&hyp)));
    }

    let inf = inf_re(p.series(), grid);
    let mut values = BTreeMap::new();
    values.insert("alpha".into(), alpha);
    values.insert("inf_re_p".into(), inf.value);
    values.insert("conclusion_margin".into(), inf.value);
    values.insert("precondition_margin".into(), precondition.margin);
    values.insert(
        "precondition_envelope_margin".into(),
        precondition.envelope_margin,
    );

    Ok(VerificationReport {
        theorem_id: id,
        params,
        verdict: classify(hyp.envelope_margin, inf.value, tols),
        gates_ok: true,
        gate_message: None,
        hypothesis_margin: hyp.margin,
        hypothesis_envelope_margin: hyp.envelope_margin,
        conclusion_values: values,
        ladder_monotone: hyp.ladder_monotone && precondition.ladder_monotone,
        grid: grid.clone(),
        seed: None,
        trial: None,
        caveat: caveat_line(order, grid),
    })
}

/// Checks the Schwarz-bound conclusion: with Q < 1 + l1 z and
/// Q (1 + w) < 1 + l z, the implied w obeys |w| <= (l + l1)/(1 - l1)
/// under the gate l + 2 l1 <= 1. The w must vanish to order n.
pub fn verify_lemma22_part2(
    q: &H1nMember,
    w: &PowerSeries,
    l: f64,
    l1: f64,
    grid: &RadialGrid,
    tols: &Tolerances,
) -> Result<VerificationReport> {
    if w.coeff(0).norm() > CONSTANT_TERM_EPS {
        return Err(Error::InvalidSeries("w(0) must be 0".into()));
    }
    let n = q.n();
    let order = q.series().order().min(w.order());
    let params = ParamEcho::two_factor(n, l, l1, None);
    let id = CriterionId::Lemma22Part2;

    for k in 1..n {
        if w.coeff(k).norm() > CONSTANT_TERM_EPS {
            let m = format!("w has a nonzero coefficient at index {k} below the membership index");
            return Ok(gate_report(id, params, grid, order, m, None));
        }
    }
    let bound = match gate_or(w_bound(l, l1))? {
        GateOr::Value(b) => b,
        GateOr::Gate(m) => return Ok(gate_report(id, params, grid, order, m, None)),
    };

    let one = PowerSeries::one(w.order());
    let w_plus = one.add(w);
    let product = q.series().mul(&w_plus);
    let hyp = subordinate_to_disk(&product, Complex64::new(l, 0.0), grid);
    let precondition = subordinate_to_disk(q.series(), Complex64::new(l1, 0.0), grid);
    if precondition.envelope_margin < -tols.boundary_band {
        let m = format!(
            "Q escapes the disk 1 + L1 z by {:.3e}",
            -precondition.envelope_margin
        );
        return Ok(gate_report(id, params, grid, order, m, Some(&hyp)));
    }

    let sup_w = sup_abs_deviation(&w_plus, grid);
    let margin = bound - sup_w.value;
    let mut values = BTreeMap::new();
    values.insert("w_bound".into(), bound);
    values.insert("sup_w".into(), sup_w.value);
    values.insert("conclusion_margin".into(), margin);
    values.insert("precondition_margin".into(), precondition.margin);
    values.insert(
        "precondition_envelope_margin".into(),
        precondition.envelope_margin,
    );

    Ok(VerificationReport {
        theorem_id: id,
        params,
        verdict: classify(hyp.envelope_margin, margin, tols),
        gates_ok: true,
        gate_message: None,
        hypothesis_margin: hyp.margin,
        hypothesis_envelope_margin: hyp.envelope_margin,
        conclusion_values: values,
        ladder_monotone: hyp.ladder_monotone && precondition.ladder_monotone,
        grid: grid.clone(),
        seed: None,
        trial: None,
        caveat: caveat_line(order, grid),
    })
}

/// Checks the starlikeness gate criterion: f'(z/f)^{1+mu} < 1 + lambda z
/// with |lambda| within the gate forces inf Re(z f'/f) > 0.
pub fn verify_theorem1(
    f: &AnMember,
    mu: Complex64,
    lambda: Complex64,
    grid: &RadialGrid,
    tols: &Tolerances,
) -> Result<VerificationReport> {
    let n = f.n();
    let order = f.order();
    let params = ParamEcho::criterion(n, mu, lambda, None);
    let id = CriterionId::Theorem1;

    let l = lambda.norm();
    if !(l > 0.0 && l <= 1.0 + GATE_SLACK) {
        let m = format!("|lambda| = {l} outside (0, 1]");
        return Ok(gate_report(id, params, grid, order, m, None));
    }
    let lmax = match gate_or(lambda_max_starlike(mu, n))? {
        GateOr::Value(v) => v,
        GateOr::Gate(m) => return Ok(gate_report(id, params, grid, order, m, None)),
    };
    let crit = f.criterion_expression(mu)?;
    let hyp = subordinate_to_disk(&crit, lambda, grid);
    if l > lmax + GATE_SLACK {
        let m = format!("|lambda| = {l} exceeds the starlikeness gate {lmax}");
        return Ok(gate_report(id, params, grid, order, m, Some(&hyp)));
    }

    let profile = starlike_profile(f, grid)?;
    let mut values = BTreeMap::new();
    values.insert("lambda_max".into(), lmax);
    values.insert("order".into(), profile.order.value);
    values.insert("deviation_sup".into(), profile.deviation.value);
    values.insert("conclusion_margin".into(), profile.order.value);

    Ok(VerificationReport {
        theorem_id: id,
        params,
        verdict: classify(hyp.envelope_margin, profile.order.value, tols),
        gates_ok: true,
        gate_message: None,
        hypothesis_margin: hyp.margin,
        hypothesis_envelope_margin: hyp.envelope_margin,
        conclusion_values: values,
        ladder_monotone: hyp.ladder_monotone && profile.ladder_monotone,
        grid: grid.clone(),
        seed: None,
        trial: None,
        caveat: caveat_line(order, grid),
    })
}

/// Checks the order and deviation criterion: under Re(mu) < n/2 and the
/// starlikeness gate, inf Re(z f'/f) clears the piecewise order; under
/// the tighter gate the deviation |z f'/f - 1| obeys the closed bound,
/// asserted only when its own gate holds.
pub fn verify_theorem2(
    f: &AnMember,
    mu: Complex64,
    lambda: Complex64,
    grid: &RadialGrid,
    tols: &Tolerances,
) -> Result<VerificationReport> {
    let n = f.n();
    let order = f.order();
    let params = ParamEcho::criterion(n, mu, lambda, None);
    let id = CriterionId::Theorem2;

    let l = lambda.norm();
    if !(l > 0.0 && l <= 1.0 + GATE_SLACK) {
        let m = format!("|lambda| = {l} outside (0, 1]");
        return Ok(gate_report(id, params, grid, order, m, None));
    }
    let cp = CriterionParams::new(n, mu, lambda)?;
    let crit = f.criterion_expression(mu)?;
    let hyp = subordinate_to_disk(&crit, lambda, grid);
    let alpha = match gate_or(thm2_order(&cp))? {
        GateOr::Value(a) => a,
        GateOr::Gate(m) => return Ok(gate_report(id, params, grid, order, m, Some(&hyp))),
    };

    let profile = starlike_profile(f, grid)?;
    let order_margin = profile.order.value - alpha.alpha;
    let mut values = BTreeMap::new();
    values.insert("alpha".into(), alpha.alpha);
    values.insert("order".into(), profile.order.value);
    values.insert("order_margin".into(), order_margin);
    values.insert("deviation_sup".into(), profile.deviation.value);
    let mut min_margin = order_margin;
    match gate_or(thm2_deviation(&cp))? {
        GateOr::Value(bound) => {
            let m = bound - profile.deviation.value;
            values.insert("deviation_bound".into(), bound);
            values.insert("deviation_margin".into(), m);
            values.insert("deviation_gate".into(), 1.0);
            min_margin = min_margin.min(m);
        }
        GateOr::Gate(_) => {
            values.insert("deviation_gate".into(), 0.0);
        }
    }
    values.insert("conclusion_margin".into(), min_margin);

    Ok(VerificationReport {
        theorem_id: id,
        params,
        verdict: classify(hyp.envelope_margin, min_margin, tols),
        gates_ok: true,
        gate_message: None,
        hypothesis_margin: hyp.margin,
        hypothesis_envelope_margin: hyp.envelope_margin,
        conclusion_values: values,
        ladder_monotone: hyp.ladder_monotone && profile.ladder_monotone,
        grid: grid.clone(),
        seed: None,
        trial: None,
        caveat: caveat_line(order, grid),
    })
}

/// Checks the transform criterion: the subordination hypothesis on f
/// transfers through the integral transform, whose starlikeness, order
/// and deviation are asserted under their respective chained gates at
/// (mu, lambda1). The coefficient identity tying the transform back to
/// the criterion expression must hold to [`TRANSFORM_RESIDUAL_CAP`];
/// a breach aborts the check rather than blaming the statement.
pub fn verify_theorem3(
    f: &AnMember,
    mu: Complex64,
    c: Complex64,
    lambda: Complex64,
    grid: &RadialGrid,
    tols: &Tolerances,
) -> Result<VerificationReport> {
    let n = f.n();
    let order = f.order();
    let params = ParamEcho::criterion(n, mu, lambda, Some(c));
    let id = CriterionId::Theorem3;

    let l = lambda.norm();
    if !(l > 0.0 && l <= 1.0 + GATE_SLACK) {
        let m = format!("|lambda| = {l} outside (0, 1]");
        return Ok(gate_report(id, params, grid, order, m, None));
    }
    let cp = CriterionParams::new(n, mu, lambda)?.with_c(c)?;
    let lambdas = match gate_or(thm3_lambdas(&cp))? {
        GateOr::Value(v) => v,
        GateOr::Gate(m) => return Ok(gate_report(id, params, grid, order, m, None)),
    };
    let crit = f.criterion_expression(mu)?;
    let hyp = subordinate_to_disk(&crit, lambda, grid);

    let spec = match gate_or(TransformSpec::new(mu, c, order))? {
        GateOr::Value(s) => s,
        GateOr::Gate(m) => return Ok(gate_report(id, params, grid, order, m, Some(&hyp))),
    };
    let transformed = bernardi_transform(f, &spec)?;
    let residual = transform_identity_residual(f, &spec)?;
    if residual > TRANSFORM_RESIDUAL_CAP {
        return Err(Error::InvalidSeries(format!(
            "transform identity residual {residual:.3e} exceeds {TRANSFORM_RESIDUAL_CAP:.0e}"
        )));
    }

    let profile = starlike_profile(&transformed, grid)?;
    let mut values = BTreeMap::new();
    values.insert("lambda1".into(), lambdas.lambda1_abs);
    values.insert("lambda2".into(), lambdas.lambda2_abs);
    values.insert("transform_residual".into(), residual);
    values.insert("order_transform".into(), profile.order.value);
    values.insert("deviation_sup_transform".into(), profile.deviation.value);

    let mut margins: Vec<f64> = Vec::new();

    // Conclusion 1: plain starlikeness of the transform, gated by the
    // chained radius clearing the starlikeness gate.
    let starlike_gate = match gate_or(lambda_max_starlike(mu, n))? {
        GateOr::Value(lmax) => lambdas.lambda1_abs <= lmax + GATE_SLACK,
        GateOr::Gate(_) => false,
    };
    values.insert("starlike_gate".into(), if starlike_gate { 1.0 } else { 0.0 });
    if starlike_gate {
        values.insert("order_margin".into(), profile.order.value);
        margins.push(profile.order.value);
    }

    // Conclusions 2 and 3 reuse the order-and-deviation calculators at
    // the chained radius; their own gates decide what gets asserted.
    let mut alpha_gate = 0.0;
    let mut deviation_gate = 0.0;
    if starlike_gate && lambdas.lambda1_abs > 0.0 && lambdas.lambda1_abs <= 1.0 + GATE_SLACK {
        let chained = CriterionParams::new(n, mu, Complex64::new(lambdas.lambda1_abs, 0.0))?;
        if let GateOr::Value(a) = gate_or(thm2_order(&chained))? {
            alpha_gate = 1.0;
            let m = profile.order.value - a.alpha;
            values.insert("alpha".into(), a.alpha);
            values.insert("alpha_margin".into(), m);
            margins.push(m);
        }
        if let GateOr::Value(bound) = gate_or(thm2_deviation(&chained))? {
            deviation_gate = 1.0;
            let m = bound - profile.deviation.value;
            values.insert("deviation_bound".into(), bound);
            values.insert("deviation_margin".into(), m);
            margins.push(m);
        }
    }
    values.insert("alpha_gate".into(), alpha_gate);
    values.insert("deviation_gate".into(), deviation_gate);

    if margins.is_empty() {
        let m = format!(
            "no conclusion gate holds at chained radius {}",
            lambdas.lambda1_abs
        );
        return Ok(gate_report(id, params, grid, order, m, Some(&hyp)));
    }
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    values.insert("conclusion_margin".into(), min_margin);

    Ok(VerificationReport {
        theorem_id: id,
        params,
        verdict: classify(hyp.envelope_margin, min_margin, tols),
        gates_ok: true,
        gate_message: None,
        hypothesis_margin: hyp.margin,
        hypothesis_envelope_margin: hyp.envelope_margin,
        conclusion_values: values,
        ladder_monotone: hyp.ladder_monotone && profile.ladder_monotone,
        grid: grid.clone(),
        seed: None,
        trial: None,
        caveat: caveat_line(order, grid),
    })
}

/// Record of one trial's closest approach.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarginRecord {
    pub trial: usize,
    pub conclusion_margin: f64,
    pub verdict: Verdict,
}

/// Tally of a falsification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FalsifySummary {
    pub theorem_id: CriterionId,
    pub trials: usize,
    pub pass: usize,
    pub boundary: usize,
    pub fail: usize,
    pub hypothesis_not_met: usize,
    /// Trials whose draw or check errored (resonant parameters, circle
    /// zeros); they produce no report.
    pub errors: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_conclusion_margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_hypothesis_margin: Option<f64>,
}

/// Result of a falsification run: flagged BOUNDARY and FAIL reports in
/// trial order, plus the ten smallest conclusion margins observed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FalsifyOutcome {
    pub summary: FalsifySummary,
    pub flagged: Vec<VerificationReport>,
    pub closest: Vec<MarginRecord>,
}

fn run_trial(
    family: &FamilySpec,
    params: &CriterionParams,
    theorem_id: CriterionId,
    chain: Option<&(f64, f64, Option<f64>)>,
    rng: &mut rand_chacha::ChaCha8Rng,
    order: usize,
    grid: &RadialGrid,
    tols: &Tolerances,
) -> Result<VerificationReport> {
    match theorem_id {
        CriterionId::Lemma21 => {
            let p = draw_lemma21_p(rng, family, params.mu, params.lambda, order)?;
            verify_lemma21(&p, params.mu, params.lambda, grid, tols)
        }
        CriterionId::Lemma22Part1 => {
            let &(l, l1, alpha) = chain.expect("chain precomputed for lemma ids");
            let alpha = alpha.expect("alpha precomputed for the half-plane part");
            let (q, p) = draw_lemma22_part1(rng, family, l, l1, alpha, order)?;
            verify_lemma22_part1(&q, &p, l, l1, alpha, grid, tols)
        }
        CriterionId::Lemma22Part2 => {
            let &(l, l1, _) = chain.expect("chain precomputed for lemma ids");
            let (q, w) = draw_lemma22_part2(rng, family, l, l1, order)?;
            verify_lemma22_part2(&q, &w, l, l1, grid, tols)
        }
        CriterionId::Theorem1 => {
            let f = draw_hypothesis_member(rng, family, params.mu, params.lambda, order, grid)?;
            verify_theorem1(&f, params.mu, params.lambda, grid, tols)
        }
        CriterionId::Theorem2 => {
            let f = draw_hypothesis_member(rng, family, params.mu, params.lambda, order, grid)?;
            verify_theorem2(&f, params.mu, params.lambda, grid, tols)
        }
        CriterionId::Theorem3 => {
            let c = params.c.expect("checked before the trial loop");
            let f = draw_hypothesis_member(rng, family, params.mu, params.lambda, order, grid)?;
            verify_theorem3(&f, params.mu, c, params.lambda, grid, tols)
        }
    }
}

/// Runs seeded random configurations against one criterion.
///
/// Deterministic: trial i draws from stream i of the family seed, so
/// any report reproduces independently of the other trials. Individual
/// trial errors are tallied, not fatal; Err is reserved for parameters
/// that cannot produce a single meaningful trial (gated-out lemma
/// chains, missing c, mismatched n).
pub fn falsify_search(
    family: &FamilySpec,
    params: &CriterionParams,
    theorem_id: CriterionId,
    trials: Option<usize>,
    order: usize,
    grid: &RadialGrid,
    tols: &Tolerances,
) -> Result<FalsifyOutcome> {
    let trials = trials.unwrap_or(family.count);
    if family.n != params.n {
        return Err(Error::InvalidParameter(format!(
            "family n = {} disagrees with params n = {}",
            family.n, params.n
        )));
    }
    let chain = match theorem_id {
        CriterionId::Lemma22Part1 | CriterionId::Lemma22Part2 => {
            let l = params.lambda.norm();
            let l1 = lambda1_bound(params.lambda, params.mu, params.n)?;
            let alpha = if theorem_id == CriterionId::Lemma22Part1 {
                Some(alpha_threshold(l, l1)?.alpha)
            } else {
                None
            };
            Some((l, l1, alpha))
        }
        CriterionId::Theorem3 => {
            if params.c.is_none() {
                return Err(Error::InvalidParameter(
                    "the transform criterion requires c".into(),
                ));
            }
            None
        }
        _ => None,
    };

    let mut summary = FalsifySummary {
        theorem_id,
        trials,
        pass: 0,
        boundary: 0,
        fail: 0,
        hypothesis_not_met: 0,
        errors: 0,
        seed: family.seed,
        min_conclusion_margin: None,
        min_hypothesis_margin: None,
    };
    let mut flagged = Vec::new();
    let mut margins: Vec<(usize, f64, Verdict)> = Vec::with_capacity(trials);

    for trial in 0..trials {
        let mut rng = family.trial_rng(trial as u64);
        match run_trial(
            family, params, theorem_id, chain.as_ref(), &mut rng, order, grid, tols,
        ) {
            Ok(mut report) => {
                report.seed = Some(family.seed);
                report.trial = Some(trial);
                match report.verdict {
                    Verdict::Pass => summary.pass += 1,
                    Verdict::Boundary => summary.boundary += 1,
                    Verdict::Fail => summary.fail += 1,
                    Verdict::HypothesisNotMet => summary.hypothesis_not_met += 1,
                }
                if report.gates_ok {
                    let h = report.hypothesis_margin;
                    summary.min_hypothesis_margin =
                        Some(summary.min_hypothesis_margin.map_or(h, |m| m.min(h)));
                }
                if let Some(m) = report.conclusion_margin() {
                    summary.min_conclusion_margin =
                        Some(summary.min_conclusion_margin.map_or(m, |x| x.min(m)));
                    margins.push((trial, m, report.verdict));
                }
                if matches!(report.verdict, Verdict::Boundary | Verdict::Fail) {
                    flagged.push(report);
                }
            }
            Err(_) => summary.errors += 1,
        }
    }

    margins.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let closest = margins
        .into_iter()
        .take(10)
        .map(|(trial, conclusion_margin, verdict)| MarginRecord {
            trial,
            conclusion_margin,
            verdict,
        })
        .collect();

    Ok(FalsifyOutcome {
        summary,
        flagged,
        closest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{extremal_p, identity, one_term};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid() -> RadialGrid {
        RadialGrid::new(vec![0.9, 0.99, 0.999], 1024).unwrap()
    }

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn classify_covers_all_branches() {
        let t = tols();
        assert_eq!(classify(0.5, 0.3, &t), Verdict::Pass);
        assert_eq!(classify(0.5, -1e-3, &t), Verdict::Fail);
        assert_eq!(classify(0.5, -1e-8, &t), Verdict::Boundary);
        assert_eq!(classify(0.5, 1e-10, &t), Verdict::Boundary);
        assert_eq!(classify(0.0, 0.3, &t), Verdict::Boundary);
        assert_eq!(classify(0.0, -1e-3, &t), Verdict::Boundary);
        assert_eq!(classify(-1e-3, 0.3, &t), Verdict::HypothesisNotMet);
    }

    #[test]
    fn lemma21_trivial_p_passes_with_full_margins() {
        let p = H1nMember::new(PowerSeries::one(8), 1).unwrap();
        let report =
            verify_lemma21(&p, c(0.5, 0.0), c(0.5, 0.0), &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!((report.hypothesis_margin - 0.5).abs() <= 1e-12);
        let raw = report.conclusion_values["conclusion_margin_raw"];
        assert!((raw - 0.5).abs() <= 1e-12, "lambda1 = lambda here");
    }

    #[test]
    fn lemma21_extremal_lands_on_the_boundary() {
        for n in 1..=3usize {
            let mu = c(0.25, 0.3);
            let lambda = c(0.5, 0.0);
            let p = extremal_p(lambda, mu, n, 32).unwrap();
            let report = verify_lemma21(&p, mu, lambda, &grid(), &tols()).unwrap();
            assert_eq!(report.verdict, Verdict::Boundary, "n = {n}");
            assert!(report.hypothesis_envelope_margin.abs() <= 1e-9);
        }
    }

    #[test]
    fn lemma21_gate_violations_are_not_met() {
        let p = H1nMember::new(PowerSeries::one(8), 1).unwrap();
        let report =
            verify_lemma21(&p, c(1.5, 0.0), c(0.5, 0.0), &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisNotMet);
        assert!(!report.gates_ok);
        assert!(report.gate_message.is_some());
        assert!(report.conclusion_values.is_empty());

        let report = verify_lemma21(&p, c(0.0, 0.0), c(0.5, 0.0), &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisNotMet);
    }

    #[test]
    fn lemma21_violated_hypothesis_is_not_met() {
        // p = 1 + 0.9 z: the hypothesis series deviates by 0.9 |1 - 1/mu|,
        // far outside 1 + 0.3 z.
        let p = H1nMember::new(
            PowerSeries::new(vec![c(1.0, 0.0), c(0.9, 0.0)]).unwrap().with_order(8),
            1,
        )
        .unwrap();
        let report = verify_lemma21(&p, c(0.25, 0.0), c(0.3, 0.0), &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisNotMet);
        assert!(report.gates_ok, "parameter gates hold; the subordination fails");
    }

    #[test]
    fn lemma22_part1_passes_on_constructed_configuration() {
        // Q = 1 + 0.2 z inside 1 + 0.25 z; product 1 + 0.4 z inside 1 + 0.5 z.
        let ord = 16;
        let one = PowerSeries::one(ord);
        let q_series = one.add(&PowerSeries::monomial(c(0.2, 0.0), 1, ord));
        let product = one.add(&PowerSeries::monomial(c(0.4, 0.0), 1, ord));
        let alpha = 0.4;
        let p_series = product
            .mul(&q_series.reciprocal().unwrap())
            .sub(&PowerSeries::constant(c(alpha, 0.0), ord))
            .scale(c(1.0 / (1.0 - alpha), 0.0));
        let q = H1nMember::new(q_series, 1).unwrap();
        let p = H1nMember::new(p_series, 1).unwrap();
        let report =
            verify_lemma22_part1(&q, &p, 0.5, 0.25, alpha, &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(report.conclusion_values["inf_re_p"] > 0.0);
    }

    #[test]
    fn lemma22_part1_fails_for_inflated_alpha() {
        // Hypotheses hold (Q = 1, product = 1 + 0.5 z inside 1 + 0.6 z)
        // but alpha = 0.9 overclaims: p = 1 + 5 z dips below zero.
        let ord = 16;
        let q = H1nMember::new(PowerSeries::one(ord), 1).unwrap();
        let p = H1nMember::new(
            PowerSeries::one(ord).add(&PowerSeries::monomial(c(5.0, 0.0), 1, ord)),
            1,
        )
        .unwrap();
        let report = verify_lemma22_part1(&q, &p, 0.6, 0.0, 0.9, &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::Fail);
        assert!(report.gates_ok);
        assert!(report.hypothesis_envelope_margin > 1e-9);
    }

    #[test]
    fn lemma22_part1_unsubordinate_q_gates_out() {
        let ord = 16;
        let q = H1nMember::new(
            PowerSeries::one(ord).add(&PowerSeries::monomial(c(0.5, 0.0), 1, ord)),
            1,
        )
        .unwrap();
        let p = H1nMember::new(PowerSeries::one(ord), 1).unwrap();
        let report = verify_lemma22_part1(&q, &p, 0.5, 0.25, 0.4, &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisNotMet);
        assert!(!report.gates_ok);
    }

    #[test]
    fn lemma22_part2_passes_and_gates() {
        let ord = 16;
        let one = PowerSeries::one(ord);
        let q_series = one.add(&PowerSeries::monomial(c(0.15, 0.0), 1, ord));
        let product = one.add(&PowerSeries::monomial(c(0.3, 0.0), 1, ord));
        let w = product.mul(&q_series.reciprocal().unwrap()).sub(&one);
        let q = H1nMember::new(q_series, 1).unwrap();
        let report = verify_lemma22_part2(&q, &w, 0.4, 0.2, &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(report.conclusion_values["sup_w"] < 0.75);

        // L + 2 L1 > 1 violates the bound's gate.
        let report = verify_lemma22_part2(&q, &w, 0.5, 0.3, &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisNotMet);
    }

    #[test]
    fn theorem1_identity_and_small_perturbation_pass() {
        let f = identity(16);
        let report = verify_theorem1(&f, c(0.5, 0.0), c(0.5, 0.0), &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!((report.hypothesis_margin - 0.5).abs() <= 1e-12);
        assert_eq!(report.conclusion_values["order"], 1.0);

        let f = one_term(c(0.2, 0.0), 1, 32).unwrap();
        let report = verify_theorem1(&f, c(0.5, 0.0), c(0.5, 0.0), &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(report.conclusion_values["order"] > 0.0);
    }

    #[test]
    fn theorem1_gate_and_hypothesis_screening() {
        let f = one_term(c(0.2, 0.0), 1, 32).unwrap();
        // lambda beyond the gate 1/sqrt(2).
        let report = verify_theorem1(&f, c(0.5, 0.0), c(0.8, 0.0), &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisNotMet);
        assert!(!report.gates_ok);

        // Hypothesis subordination fails: big coefficient, small lambda.
        let f = one_term(c(0.45, 0.0), 1, 32).unwrap();
        let report = verify_theorem1(&f, c(0.5, 0.0), c(0.2, 0.0), &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisNotMet);
        assert!(report.gates_ok);
    }

    #[test]
    fn theorem2_asserts_order_and_deviation() {
        let f = one_term(c(0.1, 0.05), 1, 32).unwrap();
        let report = verify_theorem2(&f, c(0.25, 0.0), c(0.5, 0.0), &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!((report.conclusion_values["alpha"] - 3.0 / 7.0).abs() <= 1e-12);
        assert_eq!(report.conclusion_values["deviation_gate"], 1.0);
        assert!(report.conclusion_values["deviation_margin"] > 0.0);

        // Past the deviation gate only the order is asserted.
        let report = verify_theorem2(&f, c(0.25, 0.0), c(0.65, 0.0), &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert_eq!(report.conclusion_values["deviation_gate"], 0.0);
        assert!(!report.conclusion_values.contains_key("deviation_bound"));

        // Re(mu) >= n/2 gates the whole criterion out.
        let report = verify_theorem2(&f, c(0.5, 0.0), c(0.5, 0.0), &grid(), &tols()).unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisNotMet);
    }

    #[test]
    fn theorem3_chains_through_the_transform() {
        let f = one_term(c(0.1, 0.0), 1, 64).unwrap();
        let report = verify_theorem3(
            &f,
            c(0.25, 0.0),
            c(0.75, 0.0),
            c(0.4, 0.0),
            &grid(),
            &tols(),
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!((report.conclusion_values["lambda1"] - 0.4).abs() <= 1e-12);
        assert!((report.conclusion_values["lambda2"] - 2.0 / 15.0).abs() <= 1e-12);
        assert!(report.conclusion_values["transform_residual"] <= 1e-9);
        assert_eq!(report.conclusion_values["starlike_gate"], 1.0);
        assert_eq!(report.conclusion_values["alpha_gate"], 1.0);
        assert_eq!(report.conclusion_values["deviation_gate"], 1.0);

        // c = mu is degenerate.
        let report = verify_theorem3(
            &f,
            c(0.25, 0.0),
            c(0.25, 0.0),
            c(0.4, 0.0),
            &grid(),
            &tols(),
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisNotMet);
    }

    #[test]
    fn falsify_is_deterministic_and_clean() {
        let family = FamilySpec::new(1, 0.3, 100, 99).unwrap();
        let params = CriterionParams::new(1, c(0.25, 0.0), c(0.5, 0.0)).unwrap();
        let run = || {
            falsify_search(
                &family,
                &params,
                CriterionId::Theorem1,
                Some(64),
                32,
                &grid(),
                &tols(),
            )
            .unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.summary.fail, 0);
        assert_eq!(a.summary.errors, 0);
        assert_eq!(
            a.summary.pass + a.summary.boundary + a.summary.fail + a.summary.hypothesis_not_met,
            64
        );
        assert_eq!(a.closest.len(), 10);
        for w in a.closest.windows(2) {
            assert!(w[0].conclusion_margin <= w[1].conclusion_margin);
        }
        for w in a.flagged.windows(2) {
            assert!(w[0].trial.unwrap() < w[1].trial.unwrap());
        }

        let other = FamilySpec::new(1, 0.3, 100, 100).unwrap();
        let c2 = falsify_search(
            &other,
            &params,
            CriterionId::Theorem1,
            Some(64),
            32,
            &grid(),
            &tols(),
        )
        .unwrap();
        assert_ne!(
            serde_json::to_string(&a.closest).unwrap(),
            serde_json::to_string(&c2.closest).unwrap()
        );
    }

    #[test]
    fn falsify_covers_every_criterion_without_failures() {
        let grid = RadialGrid::new(vec![0.9, 0.999], 512).unwrap();
        let family = FamilySpec::new(1, 0.25, 100, 7).unwrap();
        let params = CriterionParams::new(1, c(0.25, 0.0), c(0.4, 0.0))
            .unwrap()
            .with_c(c(0.75, 0.0))
            .unwrap();
        for id in CriterionId::ALL {
            let outcome =
                falsify_search(&family, &params, id, Some(24), 32, &grid, &tols()).unwrap();
            assert_eq!(outcome.summary.fail, 0, "{id}");
            assert_eq!(outcome.summary.hypothesis_not_met, 0, "{id}");
            assert_eq!(outcome.summary.errors, 0, "{id}");
        }
    }

    #[test]
    fn falsify_rejects_structurally_unusable_params() {
        let family = FamilySpec::new(1, 0.3, 10, 1).unwrap();
        let params = CriterionParams::new(1, c(0.25, 0.0), c(0.4, 0.0)).unwrap();
        assert!(falsify_search(
            &family,
            &params,
            CriterionId::Theorem3,
            Some(4),
            32,
            &grid(),
            &tols()
        )
        .is_err());

        let mismatched = CriterionParams::new(2, c(0.25, 0.0), c(0.4, 0.0)).unwrap();
        assert!(falsify_search(
            &family,
            &mismatched,
            CriterionId::Theorem1,
            Some(4),
            32,
            &grid(),
            &tols()
        )
        .is_err());
    }

    #[test]
    fn criterion_id_round_trips() {
        for id in CriterionId::ALL {
            assert_eq!(id.as_str().parse::<CriterionId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.as_str()));
        }
        assert!("thm4".parse::<CriterionId>().is_err());
    }

    #[test]
    fn report_serialization_is_stable() {
        let p = H1nMember::new(PowerSeries::one(8), 1).unwrap();
        let report = verify_lemma21(&p, c(0.25, 0.0), c(0.5, 0.0), &grid(), &tols()).unwrap();
        let line = crate::report::jsonl_line(&report).unwrap();
        assert!(line.contains("\"theorem_id\":\"lemma21\""));
        assert!(line.contains("\"verdict\":\"PASS\""));
        let back: VerificationReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back.verdict, Verdict::Pass);
    }
}
