//! Closed-form bound calculators and parameter gates.
//!
//! The criteria chain three quantities: the transferred subordination
//! radius lambda1 = |lambda| |mu| / |n - mu|, a starlikeness order
//! alpha(L, L1) defined piecewise, and a deviation bound for
//! |z f'/f - 1|. Everything here is plain arithmetic; series and grids
//! never enter. Strict gates are checked as printed, non-strict gates
//! get a slack of 1e-12.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Slack applied to non-strict gate inequalities.
pub const GATE_SLACK: f64 = 1e-12;

/// Parameters shared by the criteria: the membership index n, the
/// exponent mu, the subordination radius lambda, and for the transform
/// criterion the integral parameter c.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CriterionParams {
    pub n: usize,
    #[serde(with = "crate::report::c64_pair")]
    pub mu: Complex64,
    #[serde(with = "crate::report::c64_pair")]
    pub lambda: Complex64,
    #[serde(
        with = "crate::report::c64_pair_opt",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub c: Option<Complex64>,
}

impl CriterionParams {
    pub fn new(n: usize, mu: Complex64, lambda: Complex64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        for (name, v) in [("mu", mu), ("lambda", lambda)] {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        let l = lambda.norm();
        if l <= 0.0 {
            return Err(Error::InvalidParameter("lambda must be nonzero".into()));
        }
        if l > 1.0 + GATE_SLACK {
            return Err(Error::InvalidParameter("|lambda| must be at most 1".into()));
        }
        Ok(Self {
            n,
            mu,
            lambda,
            c: None,
        })
    }

    pub fn with_c(mut self, c: Complex64) -> Result<Self> {
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::InvalidParameter("c must be finite".into()));
        }
        self.c = Some(c);
        Ok(self)
    }
}

/// Which gate inequality produced the starlikeness order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlphaRegime {
    #[serde(rename = "SUM_AT_MOST_ONE")]
    SumAtMostOne,
    #[serde(rename = "SQUARES_AT_MOST_ONE")]
    SquaresAtMostOne,
}

impl std::fmt::Display for AlphaRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlphaRegime::SumAtMostOne => write!(f, "SUM_AT_MOST_ONE"),
            AlphaRegime::SquaresAtMostOne => write!(f, "SQUARES_AT_MOST_ONE"),
        }
    }
}

/// Piecewise starlikeness order with its regime and seam flag.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AlphaResult {
    pub alpha: f64,
    pub regime: AlphaRegime,
    pub boundary: bool,
}

/// |lambda1| = |lambda| |mu| / |n - mu|, the radius the subordination
/// p - z p'/mu < 1 + lambda z transfers to p itself.
pub fn lambda1_bound(lambda: Complex64, mu: Complex64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if mu.norm() <= GATE_SLACK {
        return Err(Error::ZeroMu);
    }
    if mu.re >= n as f64 {
        return Err(Error::GateViolation(format!(
            "Re(mu) = {} must be < n = {n}",
            mu.re
        )));
    }
    let l = lambda.norm();
    if l <= 0.0 {
        return Err(Error::GateViolation("lambda must be nonzero".into()));
    }
    if l > 1.0 + GATE_SLACK {
        return Err(Error::GateViolation("|lambda| must be at most 1".into()));
    }
    Ok(l * mu.norm() / (Complex64::new(n as f64, 0.0) - mu).norm())
}

/// The radial lower envelope h(phi) whose minimum over the circle is the
/// starlikeness order: h = (1 - L L1 cos(phi) - sqrt(L^2 - 2 L L1 cos(phi) + L1^2)) / (1 - L1^2).
///
/// Callers gate the domain (0 <= L1 < 1 needed for the denominator).
pub fn h_function(phi: f64, l: f64, l1: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&l1), "h_function needs 0 <= L1 < 1");
    let cos = phi.cos();
    let root = (l * l - 2.0 * l * l1 * cos + l1 * l1).max(0.0).sqrt();
    (1.0 - l * l1 * cos - root) / (1.0 - l1 * l1)
}

fn clamp_alpha(alpha: f64) -> f64 {
    alpha.clamp(0.0, 1.0 - f64::EPSILON)
}

/// Minimum of [`h_function`] over the circle, in closed form.
///
/// For L + L1 <= 1 the minimum sits at phi = pi and equals
/// (1 - L)/(1 + L1); once L + L1 exceeds 1 (but L^2 + L1^2 <= 1) an
/// interior critical point takes over with (1 - L^2 - L1^2)/(2 (1 - L1^2)).
/// On the seam L + L1 = 1 both formulas agree; the sum regime is
/// reported there with the boundary flag set.
pub fn alpha_threshold(l: f64, l1: f64) -> Result<AlphaResult> {
    if !(l > 0.0 && l < 1.0) {
        return Err(Error::GateViolation(format!("L = {l} must lie in (0, 1)")));
    }
    if !(l1 >= 0.0 && l1 <= l + GATE_SLACK) {
        return Err(Error::GateViolation(format!(
            "L1 = {l1} must lie in [0, L = {l}]"
        )));
    }
    let boundary = (l + l1 - 1.0).abs() <= GATE_SLACK;
    if l + l1 <= 1.0 + GATE_SLACK {
        return Ok(AlphaResult {
            alpha: clamp_alpha((1.0 - l) / (1.0 + l1)),
            regime: AlphaRegime::SumAtMostOne,
            boundary,
        });
    }
    if l * l + l1 * l1 <= 1.0 + GATE_SLACK {
        return Ok(AlphaResult {
            alpha: clamp_alpha((1.0 - (l * l + l1 * l1)) / (2.0 * (1.0 - l1 * l1))),
            regime: AlphaRegime::SquaresAtMostOne,
            boundary,
        });
    }
    Err(Error::GateViolation(format!(
        "L^2 + L1^2 = {} exceeds 1",
        l * l + l1 * l1
    )))
}

/// Bound on the Schwarz function of the transferred subordination:
/// (L + L1)/(1 - L1), at most 1 under the gate L + 2 L1 <= 1.
pub fn w_bound(l: f64, l1: f64) -> Result<f64> {
    if l.is_nan() || l <= 0.0 || l1 < 0.0 {
        return Err(Error::GateViolation(
            "w_bound needs L > 0 and L1 >= 0".into(),
        ));
    }
    if l + 2.0 * l1 > 1.0 + GATE_SLACK {
        return Err(Error::GateViolation(format!(
            "L + 2 L1 = {} exceeds 1",
            l + 2.0 * l1
        )));
    }
    Ok((l + l1) / (1.0 - l1))
}

/// Largest |lambda| for which the subordination criterion still forces
/// starlikeness: |n - mu| / sqrt(|n - mu|^2 + |mu|^2), always below 1.
pub fn lambda_max_starlike(mu: Complex64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if mu.norm() <= GATE_SLACK {
        return Err(Error::ZeroMu);
    }
    if mu.re >= n as f64 {
        return Err(Error::GateViolation(format!(
            "Re(mu) = {} must be < n = {n}",
            mu.re
        )));
    }
    let a = (Complex64::new(n as f64, 0.0) - mu).norm();
    let m = mu.norm();
    Ok(a / (a * a + m * m).sqrt())
}

/// Total turning angle asin(L) + asin(L1) from the two subordination
/// factors. The gate 1 - L L1 / sqrt((1-L^2)(1-L1^2)) >= 0, equivalent
/// to L^2 + L1^2 <= 1, is exactly the condition for the sum to stay at
/// or below pi/2.
///
/// The angle is symmetric in its arguments and the chained radius L1
/// can exceed L once Re(mu) >= n/2, so no ordering is imposed.
pub fn arg_sum_bound(l: f64, l1: f64) -> Result<f64> {
    if !(l > 0.0 && l < 1.0) {
        return Err(Error::GateViolation(format!("L = {l} must lie in (0, 1)")));
    }
    if !(0.0..1.0).contains(&l1) {
        return Err(Error::GateViolation(format!(
            "L1 = {l1} must lie in [0, 1)"
        )));
    }
    if l * l + l1 * l1 > 1.0 + GATE_SLACK {
        return Err(Error::GateViolation(
            "angle would exceed pi/2: L^2 + L1^2 > 1".into(),
        ));
    }
    Ok(l.asin() + l1.asin())
}

/// Starlikeness order of f itself under the subordination hypothesis
/// with exponent mu: alpha_threshold at (|lambda|, lambda1). Gated by
/// Re(mu) < n/2, which makes lambda1 < |lambda|, and |lambda| <=
/// lambda_max so that the squares gate always holds.
pub fn thm2_order(params: &CriterionParams) -> Result<AlphaResult> {
    let n = params.n;
    if params.mu.re >= n as f64 / 2.0 {
        return Err(Error::GateViolation(format!(
            "Re(mu) = {} must be < n/2 = {}",
            params.mu.re,
            n as f64 / 2.0
        )));
    }
    let l = params.lambda.norm();
    let lmax = lambda_max_starlike(params.mu, n)?;
    if l > lmax + GATE_SLACK {
        return Err(Error::GateViolation(format!(
            "|lambda| = {l} exceeds the starlikeness gate {lmax}"
        )));
    }
    let l1 = lambda1_bound(params.lambda, params.mu, n)?;
    alpha_threshold(l, l1)
}

/// Bound for sup |z f'/f - 1| under the tighter gate
/// |lambda| <= |n - mu| / (|n - mu| + 2 |mu|). Algebraically identical
/// to w_bound(|lambda|, lambda1).
pub fn thm2_deviation(params: &CriterionParams) -> Result<f64> {
    let n = params.n;
    if params.mu.re >= n as f64 / 2.0 {
        return Err(Error::GateViolation(format!(
            "Re(mu) = {} must be < n/2 = {}",
            params.mu.re,
            n as f64 / 2.0
        )));
    }
    if params.mu.norm() <= GATE_SLACK {
        return Err(Error::ZeroMu);
    }
    let a = (Complex64::new(n as f64, 0.0) - params.mu).norm();
    let m = params.mu.norm();
    let l = params.lambda.norm();
    let gate = a / (a + 2.0 * m);
    if !(l > 0.0 && l <= gate + GATE_SLACK) {
        return Err(Error::GateViolation(format!(
            "|lambda| = {l} outside (0, {gate}]"
        )));
    }
    Ok((a + m) * l / (a - m * l))
}

/// The two transferred radii of the transform criterion.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TransformLambdas {
    pub lambda1_abs: f64,
    pub lambda2_abs: f64,
}

/// Chained radii of the transform criterion as stated:
/// |lambda1| = |lambda| |c - mu| / |n - (c - mu)| and
/// |lambda2| = |lambda1| |mu| / |n - mu|.
pub fn thm3_lambdas(params: &CriterionParams) -> Result<TransformLambdas> {
    let c = params
        .c
        .ok_or_else(|| Error::InvalidParameter("transform criterion requires c".into()))?;
    if params.mu.norm() <= GATE_SLACK {
        return Err(Error::ZeroMu);
    }
    let d = c - params.mu;
    if d.norm() <= GATE_SLACK {
        return Err(Error::GateViolation("c = mu is degenerate".into()));
    }
    let n = params.n as f64;
    if d.re >= n {
        return Err(Error::GateViolation(format!(
            "Re(c - mu) = {} must be < n = {n}",
            d.re
        )));
    }
    let nmmu = (Complex64::new(n, 0.0) - params.mu).norm();
    if nmmu <= GATE_SLACK {
        return Err(Error::GateViolation("mu = n is degenerate".into()));
    }
    let lambda1_abs = params.lambda.norm() * d.norm() / (Complex64::new(n, 0.0) - d).norm();
    let lambda2_abs = lambda1_abs * params.mu.norm() / nmmu;
    Ok(TransformLambdas {
        lambda1_abs,
        lambda2_abs,
    })
}

/// Which n = 1 real-parameter specialization to cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Corollary {
    /// Piecewise order and Schwarz bound for real (lambda, lambda1).
    C2_3,
    /// Plain starlikeness gate at real 0 < mu < 1.
    C2_5,
    /// Order and deviation chain at real 0 < mu < 1/2.
    C2_7,
    /// Transform chain at real parameters.
    C2_9,
}

impl std::str::FromStr for Corollary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c2_3" | "C2_3" => Ok(Corollary::C2_3),
            "c2_5" | "C2_5" => Ok(Corollary::C2_5),
            "c2_7" | "C2_7" => Ok(Corollary::C2_7),
            "c2_9" | "C2_9" => Ok(Corollary::C2_9),
            other => Err(Error::InvalidParameter(format!("unknown corollary {other}"))),
        }
    }
}

/// Outcome of sweeping a corollary's real-parameter formulas against the
/// general complex-parameter code path.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorollaryCheck {
    pub which: Corollary,
    pub points: usize,
    pub max_rel_err: f64,
    pub tol: f64,
    pub ok: bool,
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Sweeps the n = 1 real-parameter corollary formulas against the
/// general code path. A failing sweep is a report outcome, not an error.
pub fn corollary_reduction_check(which: Corollary) -> CorollaryCheck {
    let tol = 1e-14;
    let mut max_err = 0.0f64;
    let mut points = 0usize;
    let mut record = |err: f64| {
        if err > max_err {
            max_err = err;
        }
        points += 1;
    };

    match which {
        Corollary::C2_3 => {
            // General alpha/w formulas against the direct real-parameter
            // piecewise forms for 0 < lambda1 < lambda < 1.
            for i in 1..=10 {
                let l = i as f64 / 11.0;
                for j in 1..=9 {
                    let l1 = l * j as f64 / 10.0;
                    if l * l + l1 * l1 <= 1.0 {
                        let direct = if l + l1 <= 1.0 {
                            (1.0 - l) / (1.0 + l1)
                        } else {
                            (1.0 - (l * l + l1 * l1)) / (2.0 * (1.0 - l1 * l1))
                        };
                        let general = alpha_threshold(l, l1).unwrap().alpha;
                        record(rel_err(direct, general));
                    }
                    if l + 2.0 * l1 <= 1.0 {
                        let direct = (l + l1) / (1.0 - l1);
                        record(rel_err(direct, w_bound(l, l1).unwrap()));
                    }
                }
            }
        }
        Corollary::C2_5 => {
            for i in 1..=100 {
                let mu = i as f64 / 101.0;
                let direct = (1.0 - mu) / ((1.0 - mu) * (1.0 - mu) + mu * mu).sqrt();
                let general = lambda_max_starlike(Complex64::new(mu, 0.0), 1).unwrap();
                record(rel_err(direct, general));
            }
        }
        Corollary::C2_7 => {
            for i in 1..=24 {
                let mu = i as f64 / 50.0;
                let lmax = (1.0 - mu) / ((1.0 - mu) * (1.0 - mu) + mu * mu).sqrt();
                for j in 1..=10 {
                    let lambda = lmax * j as f64 / 11.0;
                    let params = CriterionParams::new(
                        1,
                        Complex64::new(mu, 0.0),
                        Complex64::new(lambda, 0.0),
                    )
                    .unwrap();
                    let l1 = lambda * mu / (1.0 - mu);
                    let direct = if lambda + l1 <= 1.0 {
                        (1.0 - lambda) / (1.0 + l1)
                    } else {
                        (1.0 - (lambda * lambda + l1 * l1)) / (2.0 * (1.0 - l1 * l1))
                    };
                    record(rel_err(direct, thm2_order(&params).unwrap().alpha));
                    if lambda <= (1.0 - mu) / (1.0 + mu) {
                        let direct = lambda / (1.0 - mu - mu * lambda);
                        record(rel_err(direct, thm2_deviation(&params).unwrap()));
                    }
                }
            }
        }
        Corollary::C2_9 => {
            for i in 1..=9 {
                let mu = i as f64 / 20.0;
                for j in 1..=9 {
                    let d = j as f64 / 10.0;
                    let c = mu + d;
                    if (1.0 - d).abs() < 1e-9 {
                        continue;
                    }
                    for k in 1..=5 {
                        let lambda = k as f64 / 6.0;
                        let params = CriterionParams::new(
                            1,
                            Complex64::new(mu, 0.0),
                            Complex64::new(lambda, 0.0),
                        )
                        .unwrap()
                        .with_c(Complex64::new(c, 0.0))
                        .unwrap();
                        let got = thm3_lambdas(&params).unwrap();
                        let l1 = lambda * d / (1.0 - d);
                        let l2 = l1 * mu / (1.0 - mu);
                        record(rel_err(l1, got.lambda1_abs));
                        record(rel_err(l2, got.lambda2_abs));
                    }
                }
            }
        }
    }

    CorollaryCheck {
        which,
        points,
        max_rel_err: max_err,
        tol,
        ok: max_err <= tol,
    }
}
