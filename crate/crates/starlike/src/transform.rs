//! The Bernardi-type integral transform, realized coefficientwise.
//!
//! For f in A_n and exponents (mu, c) the transform is
//!
//!   F(z) = z * [ (c - mu) z^{mu - c} Integral_0^z (t/f(t))^mu t^{c-mu-1} dt ]^{-1/mu}
//!
//! At the series level the bracket is G with g_0 = 1 and
//! g_k = q_k (c - mu) / ((c - mu) + k), where q = (z/f)^mu. The
//! coefficient map is exact for truncated series; quadrature appears
//! only as a test oracle. Resonant denominators (c - mu) + k = 0 are
//! rejected outright rather than regularized.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::series::{AnMember, PowerSeries};
use crate::{Error, Result};

/// Exponent pair and truncation order for the transform.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TransformSpec {
    #[serde(with = "crate::report::c64_pair")]
    pub mu: Complex64,
    #[serde(with = "crate::report::c64_pair")]
    pub c: Complex64,
    pub order: usize,
}

/// Denominators closer to zero than this are treated as resonant.
const RESONANCE_EPS: f64 = 1e-9;

impl TransformSpec {
    pub fn new(mu: Complex64, c: Complex64, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidParameter("order must be at least 2".into()));
        }
        if mu.norm() <= 1e-12 {
            return Err(Error::ZeroMu);
        }
        let d = c - mu;
        if d.norm() <= 1e-12 {
            return Err(Error::GateViolation("c = mu is degenerate".into()));
        }
        for k in 1..=order {
            if (d + Complex64::new(k as f64, 0.0)).norm() <= RESONANCE_EPS {
                return Err(Error::Resonance { k });
            }
        }
        Ok(Self { mu, c, order })
    }
}

/// q = (z/f)^mu, the subordination kernel of the criteria. Constant
/// term 1, coefficients 1..n-1 vanish.
pub fn q_series(f: &AnMember, mu: Complex64) -> Result<PowerSeries> {
    f.z_over_f()?.cpow(mu)
}

/// The bracket series G: g_k = q_k (c - mu) / ((c - mu) + k).
fn bracket_series(f: &AnMember, spec: &TransformSpec) -> Result<PowerSeries> {
    let q = q_series(f, spec.mu)?;
    let d = spec.c - spec.mu;
    let coeffs = q
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &qk)| qk * d / (d + Complex64::new(k as f64, 0.0)))
        .collect();
    PowerSeries::new(coeffs)
}

fn assemble(f: &AnMember, spec: &TransformSpec, g: &PowerSeries) -> Result<AnMember> {
    let inner = g.cpow(-Complex64::new(1.0, 0.0) / spec.mu)?;
    AnMember::new(inner.mul_z(), f.n())
}

/// Coefficientwise transform. The input is truncated (or padded) to
/// spec.order first; F comes back with that order and the same n.
pub fn bernardi_transform(f: &AnMember, spec: &TransformSpec) -> Result<AnMember> {
    let f = AnMember::new(f.series().with_order(spec.order), f.n())?;
    let g = bracket_series(&f, spec)?;
    assemble(&f, spec, &g)
}

fn residual_against(f: &AnMember, spec: &TransformSpec, transformed: &AnMember) -> Result<f64> {
    let q_of_transformed = transformed.criterion_expression(spec.mu)?;
    let d = spec.c - spec.mu;
    let lhs = q_of_transformed.add(
        &q_of_transformed
            .derivative()
            .mul_z()
            .scale(Complex64::new(1.0, 0.0) / d),
    );
    let rhs = f.criterion_expression(spec.mu)?;
    let k_max = spec.order / 2;
    Ok((0..=k_max.min(lhs.order()).min(rhs.order()))
        .map(|k| (lhs.coeff(k) - rhs.coeff(k)).norm())
        .fold(0.0, f64::max))
}

/// Fidelity check for the transform: with F = bernardi_transform(f) and
/// Q = F'(z/F)^{1+mu}, the first half of the coefficients of
/// Q + zQ'/(c - mu) must reproduce f'(z/f)^{1+mu}. The identity is
/// exact at the coefficient level, so the residual measures only
/// floating-point noise; anything large means the pipeline is broken.
pub fn transform_identity_residual(f: &AnMember, spec: &TransformSpec) -> Result<f64> {
    let f = AnMember::new(f.series().with_order(spec.order), f.n())?;
    let transformed = bernardi_transform(&f, spec)?;
    residual_against(&f, spec, &transformed)
}
