//! Circle sampling and disk-geometry estimates.
//!
//! All bounds are taken over a [`RadialGrid`]: a ladder of circles
//! |z| = r_i sampled at M equispaced angles. Sampled sups of |p - 1| are
//! nondecreasing in r for analytic p (maximum principle), so a decreasing
//! ladder is flagged as a truncation red flag rather than trusted.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::series::{AnMember, PowerSeries, CONSTANT_TERM_EPS};
use crate::{Error, Result};

/// Sampling grid: circles |z| = r_i, each at `angular_count` angles.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RadialGrid {
    radii: Vec<f64>,
    angular_count: usize,
}

pub const DEFAULT_RADII: [f64; 3] = [0.9, 0.99, 0.999];
pub const DEFAULT_ANGULAR_COUNT: usize = 4096;

impl Default for RadialGrid {
    fn default() -> Self {
        Self {
            radii: DEFAULT_RADII.to_vec(),
            angular_count: DEFAULT_ANGULAR_COUNT,
        }
    }
}

impl RadialGrid {
    /// Radii must be strictly inside (0, 1) and strictly ascending.
    pub fn new(radii: Vec<f64>, angular_count: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidGrid("at least one radius required".into()));
        }
        for r in &radii {
            if !(*r > 0.0 && *r < 1.0) {
                return Err(Error::InvalidGrid(format!("radius {r} outside (0, 1)")));
            }
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid("radii must be strictly ascending".into()));
        }
        if angular_count == 0 {
            return Err(Error::InvalidGrid("angular count must be positive".into()));
        }
        Ok(Self { radii, angular_count })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    pub fn outermost(&self) -> f64 {
        *self.radii.last().unwrap()
    }
}

/// Which side of a bound an estimate approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Supremum,
    Infimum,
}

/// A sampled extremum together with the point that attained it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundEstimate {
    pub value: f64,
    #[serde(with = "crate::report::c64_pair")]
    pub witness: Complex64,
    pub radius: f64,
    pub kind: BoundKind,
}

/// Table of M-th roots of unity, cached per M. The grids are reused
/// across tens of thousands of trials, so the trig is paid once.
fn unit_roots(m: usize) -> Arc<Vec<Complex64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Complex64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(m)
        .or_insert_with(|| {
            let roots = (0..m)
                .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / m as f64))
                .collect();
            Arc::new(roots)
        })
        .clone()
}

/// Values p(r e^{2 pi i j / m}) for j = 0..m, by Horner evaluation.
pub fn eval_on_circle(p: &PowerSeries, r: f64, m: usize) -> Vec<Complex64> {
    assert!(r > 0.0 && r < 1.0, "radius must lie in (0, 1)");
    assert!(m >= 1);
    let roots = unit_roots(m);
    roots.iter().map(|root| p.eval(r * root)).collect()
}

/// Per-radius supremum of |p(z) - 1| with its witness.
fn deviation_ladder(p: &PowerSeries, grid: &RadialGrid) -> Vec<(f64, Complex64, f64)> {
    let roots = unit_roots(grid.angular_count());
    grid.radii()
        .iter()
        .map(|&r| {
            let mut best = -1.0f64;
            let mut at = Complex64::new(0.0, 0.0);
            for root in roots.iter() {
                let z = r * root;
                let d = (p.eval(z) - Complex64::new(1.0, 0.0)).norm();
                if d > best {
                    best = d;
                    at = z;
                }
            }
            (best, at, r)
        })
        .collect()
}

/// sup |p(z) - 1|, reported from the outermost circle. The inner rungs
/// of the ladder only exist to expose truncation trouble: for analytic
/// p the sups must grow with r.
pub fn sup_abs_deviation(p: &PowerSeries, grid: &RadialGrid) -> BoundEstimate {
    let ladder = deviation_ladder(p, grid);
    let &(value, witness, radius) = ladder.last().unwrap();
    BoundEstimate {
        value,
        witness,
        radius,
        kind: BoundKind::Supremum,
    }
}

/// Result of testing p < 1 + lambda z on a sampling grid.
///
/// `margin` is |lambda| - sup |p - 1| as sampled; `holds` is its sign.
/// `envelope_margin` is the sharper per-radius test against the Schwarz
/// envelope |lambda| r^n, where n is the order of the first nonvanishing
/// deviation coefficient of p: any subordinate member of H[1, n] obeys
/// |p(z) - 1| <= |lambda| |z|^n, so a sampled excess at some inner radius
/// already disproves subordination, and an extremal member sits at zero.
/// `boundary` flags configurations within 1e-9 of that envelope.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubordinationCheck {
    pub holds: bool,
    pub margin: f64,
    pub boundary: bool,
    pub envelope_margin: f64,
    pub lambda_abs: f64,
    pub deviation_order: usize,
    pub sup: BoundEstimate,
    pub per_radius_sup: Vec<f64>,
    pub ladder_monotone: bool,
}

pub const BOUNDARY_BAND: f64 = 1e-9;

/// Tests subordination of p to the disk map 1 + lambda z by sampling.
pub fn subordinate_to_disk(p: &PowerSeries, lambda: Complex64, grid: &RadialGrid) -> SubordinationCheck {
    let lambda_abs = lambda.norm();
    let ladder = deviation_ladder(p, grid);
    let &(sup_value, witness, radius) = ladder.last().unwrap();
    let ladder_monotone = ladder.windows(2).all(|w| w[0].0 <= w[1].0 + 1e-13);

    // Deviation order: first nonvanishing coefficient of p - 1.
    let deviation_order = (1..=p.order())
        .find(|&k| p.coeff(k).norm() > CONSTANT_TERM_EPS)
        .unwrap_or(1);

    let envelope_margin = ladder
        .iter()
        .map(|&(sup_r, _, r)| lambda_abs * r.powi(deviation_order as i32) - sup_r)
        .fold(f64::INFINITY, f64::min);

    let margin = lambda_abs - sup_value;
    SubordinationCheck {
        holds: margin >= 0.0,
        margin,
        boundary: envelope_margin.abs() <= BOUNDARY_BAND,
        envelope_margin,
        lambda_abs,
        deviation_order,
        sup: BoundEstimate {
            value: sup_value,
            witness,
            radius,
            kind: BoundKind::Supremum,
        },
        per_radius_sup: ladder.iter().map(|l| l.0).collect(),
        ladder_monotone,
    }
}

/// Joint order and deviation profile of z f'(z) / f(z) on a grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StarlikeProfile {
    /// inf Re(z f'/f): the sampled starlikeness order.
    pub order: BoundEstimate,
    /// sup |z f'/f - 1|.
    pub deviation: BoundEstimate,
    pub per_radius_inf: Vec<f64>,
    pub ladder_monotone: bool,
}

/// Computes inf Re(z f'/f) and sup |z f'/f - 1| in one pass.
///
/// Fails with `ZeroOnCircle` if |f| drops below 1e-9 at a sample point,
/// since the ratio is then numerically meaningless.
pub fn starlike_profile(f: &AnMember, grid: &RadialGrid) -> Result<StarlikeProfile> {
    let series = f.series();
    let deriv = series.derivative();
    let roots = unit_roots(grid.angular_count());

    let mut inf = f64::INFINITY;
    let mut inf_at = Complex64::new(0.0, 0.0);
    let mut sup = -1.0f64;
    let mut sup_at = Complex64::new(0.0, 0.0);
    let mut per_radius_inf = Vec::with_capacity(grid.radii().len());

    for &r in grid.radii() {
        // Reported bounds come from the outermost circle; inner rungs
        // feed the monotonicity diagnostic only.
        inf = f64::INFINITY;
        sup = -1.0;
        for root in roots.iter() {
            let z = r * root;
            let fv = series.eval(z);
            if fv.norm() < 1e-9 {
                return Err(Error::ZeroOnCircle { radius: r });
            }
            let ratio = z * deriv.eval(z) / fv;
            if ratio.re < inf {
                inf = ratio.re;
                inf_at = z;
            }
            let d = (ratio - Complex64::new(1.0, 0.0)).norm();
            if d > sup {
                sup = d;
                sup_at = z;
            }
        }
        per_radius_inf.push(inf);
    }

    let r_out = grid.outermost();
    let ladder_monotone = per_radius_inf.windows(2).all(|w| w[0] >= w[1] - 1e-13);
    Ok(StarlikeProfile {
        order: BoundEstimate {
            value: inf,
            witness: inf_at,
            radius: r_out,
            kind: BoundKind::Infimum,
        },
        deviation: BoundEstimate {
            value: sup,
            witness: sup_at,
            radius: r_out,
            kind: BoundKind::Supremum,
        },
        per_radius_inf,
        ladder_monotone,
    })
}

/// Sampled starlikeness order: inf Re(z f'(z)/f(z)) over the grid.
pub fn starlikeness_order(f: &AnMember, grid: &RadialGrid) -> Result<BoundEstimate> {
    Ok(starlike_profile(f, grid)?.order)
}

/// inf Re p(z) over the grid, reported from the outermost circle.
pub fn inf_re(p: &PowerSeries, grid: &RadialGrid) -> BoundEstimate {
    let roots = unit_roots(grid.angular_count());
    let mut value = f64::INFINITY;
    let mut witness = Complex64::new(0.0, 0.0);
    let r = grid.outermost();
    for root in roots.iter() {
        let z = r * root;
        let re = p.eval(z).re;
        if re < value {
            value = re;
            witness = z;
        }
    }
    BoundEstimate {
        value,
        witness,
        radius: r,
        kind: BoundKind::Infimum,
    }
}

/// Ratio z0 w'(z0) / w(z0) at the angle maximizing |w| on |z| = r.
///
/// For a Schwarz-type w vanishing to order n at the origin the ratio at
/// a max-modulus point is real and at least n. The coarse argmax over m
/// angles is refined by golden-section search; a monomial c z^k, whose
/// modulus is constant on the circle, short-circuits to exactly k.
pub fn jack_lemma_witness(w: &PowerSeries, r: f64, m: usize) -> Result<Complex64> {
    assert!(r > 0.0 && r < 1.0, "radius must lie in (0, 1)");
    assert!(m >= 8);
    if w.coeff(0).norm() > CONSTANT_TERM_EPS {
        return Err(Error::InvalidSeries("w(0) must be 0".into()));
    }
    let top = match w.top_nonzero() {
        Some(k) => k,
        None => return Err(Error::InvalidSeries("w must not vanish identically".into())),
    };
    let nonzero: Vec<usize> = (1..=w.order())
        .filter(|&k| w.coeff(k).norm() > CONSTANT_TERM_EPS)
        .collect();
    if nonzero.len() == 1 {
        return Ok(Complex64::new(nonzero[0] as f64, 0.0));
    }
    let _ = top;

    let modulus = |theta: f64| w.eval(Complex64::from_polar(r, theta)).norm_sqr();

    let roots = unit_roots(m);
    let mut best_j = 0;
    let mut best = -1.0f64;
    let mut min = f64::INFINITY;
    for (j, root) in roots.iter().enumerate() {
        let v = w.eval(r * root).norm_sqr();
        if v > best {
            best = v;
            best_j = j;
        }
        if v < min {
            min = v;
        }
    }
    if best <= 0.0 || (best - min) / best <= 1e-12 {
        return Err(Error::DegenerateMaximum);
    }

    // Golden-section refinement on one grid cell each side of the argmax.
    let step = std::f64::consts::TAU / m as f64;
    let center = step * best_j as f64;
    let (mut a, mut b) = (center - step, center + step);
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = modulus(x1);
    let mut f2 = modulus(x2);
    for _ in 0..60 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = modulus(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = modulus(x1);
        }
    }
    let mut theta = 0.5 * (a + b);

    // Modulus comparisons saturate near sqrt(eps) because the peak is
    // flat to second order. d/dtheta log|w| = -Im(z w'/w) crosses zero
    // linearly at the peak, so bisecting on it recovers full precision.
    let dw = w.derivative();
    let ratio_at = |theta: f64| -> Option<Complex64> {
        let z = Complex64::from_polar(r, theta);
        let v = w.eval(z);
        (v.norm() >= 1e-12).then(|| z * dw.eval(z) / v)
    };
    let delta = 0.125 * step;
    if let (Some(lo), Some(hi)) = (ratio_at(theta - delta), ratio_at(theta + delta)) {
        if lo.im < 0.0 && hi.im > 0.0 {
            let (mut ta, mut tb) = (theta - delta, theta + delta);
            for _ in 0..80 {
                let mid = 0.5 * (ta + tb);
                match ratio_at(mid) {
                    Some(v) if v.im < 0.0 => ta = mid,
                    Some(_) => tb = mid,
                    None => break,
                }
            }
            theta = 0.5 * (ta + tb);
        }
    }

    let z0 = Complex64::from_polar(r, theta);
    let w0 = w.eval(z0);
    if w0.norm() < 1e-12 {
        return Err(Error::DegenerateMaximum);
    }
    Ok(z0 * dw.eval(z0) / w0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn series(coeffs: &[(f64, f64)]) -> PowerSeries {
        PowerSeries::new(coeffs.iter().map(|&(a, b)| c(a, b)).collect()).unwrap()
    }

    #[test]
    fn eval_on_circle_cardinal_points() {
        let p = series(&[(0.0, 0.0), (1.0, 0.0)]);
        let vals = eval_on_circle(&p, 0.5, 4);
        let expect = [c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0), c(0.0, -0.5)];
        for (v, e) in vals.iter().zip(expect.iter()) {
            assert!((v - e).norm() <= 1e-15);
        }
    }

    #[test]
    fn eval_on_circle_matches_power_sum() {
        let p = series(&[(1.0, 0.5), (-0.3, 0.2), (0.7, -0.1), (0.0, 0.4), (-0.2, -0.2)]);
        let vals = eval_on_circle(&p, 0.77, 8);
        for (j, v) in vals.iter().enumerate() {
            let z = Complex64::from_polar(0.77, std::f64::consts::TAU * j as f64 / 8.0);
            let mut naive = c(0.0, 0.0);
            for (k, coeff) in p.coeffs().iter().enumerate() {
                naive += coeff * z.powu(k as u32);
            }
            assert!((v - naive).norm() <= 1e-13, "j = {j}");
        }
    }

    #[test]
    fn sup_abs_deviation_linear_case() {
        let p = series(&[(1.0, 0.0), (0.3, 0.0)]);
        let est = sup_abs_deviation(&p, &RadialGrid::default());
        assert!((est.value - 0.3 * 0.999).abs() <= 1e-12);
        assert_eq!(est.radius, 0.999);
        assert_eq!(est.kind, BoundKind::Supremum);
    }

    #[test]
    fn sup_abs_deviation_against_dense_scan() {
        let p = series(&[(1.0, 0.0), (0.2, 0.0), (0.1, 0.0)]);
        let grid = RadialGrid::new(vec![0.99], 4096).unwrap();
        let est = sup_abs_deviation(&p, &grid);
        let mut dense = 0.0f64;
        let m = 1_000_000;
        for j in 0..m {
            let z = Complex64::from_polar(0.99, std::f64::consts::TAU * j as f64 / m as f64);
            dense = dense.max((p.eval(z) - c(1.0, 0.0)).norm());
        }
        assert!((est.value - dense).abs() <= 1e-6);
    }

    #[test]
    fn subordination_verdicts() {
        let grid = RadialGrid::default();
        let lambda = c(0.5, 0.0);

        let inside = series(&[(1.0, 0.0), (0.2, 0.0)]);
        let chk = subordinate_to_disk(&inside, lambda, &grid);
        assert!(chk.holds && !chk.boundary);
        assert!((chk.margin - (0.5 - 0.2 * 0.999)).abs() <= 1e-12);
        assert!(chk.ladder_monotone);

        let extremal = series(&[(1.0, 0.0), (0.5, 0.0)]);
        let chk = subordinate_to_disk(&extremal, lambda, &grid);
        assert!(chk.holds && chk.boundary);
        assert!(chk.envelope_margin.abs() <= BOUNDARY_BAND);

        let outside = series(&[(1.0, 0.0), (0.6, 0.0)]);
        let chk = subordinate_to_disk(&outside, lambda, &grid);
        assert!(!chk.holds);
        assert!(chk.margin < 0.0);
    }

    #[test]
    fn envelope_uses_deviation_order() {
        // p = 1 + 0.5 z^2 against lambda = 0.5: extremal for n = 2.
        let p = series(&[(1.0, 0.0), (0.0, 0.0), (0.5, 0.0)]);
        let chk = subordinate_to_disk(&p, c(0.5, 0.0), &RadialGrid::default());
        assert_eq!(chk.deviation_order, 2);
        assert!(chk.boundary);
    }

    fn an(coeffs: &[(f64, f64)], n: usize) -> AnMember {
        AnMember::new(series(coeffs), n).unwrap()
    }

    #[test]
    fn order_of_identity_is_exactly_one() {
        let f = an(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)], 1);
        let est = starlikeness_order(&f, &RadialGrid::default()).unwrap();
        assert_eq!(est.value, 1.0);
    }

    #[test]
    fn order_matches_closed_forms_at_inner_radius() {
        // Large truncation order so the tail is dead at r = 0.9.
        let grid = RadialGrid::new(vec![0.9], 2048).unwrap();

        let mut koebe = vec![c(0.0, 0.0)];
        koebe.extend((1..=2048).map(|k| c(k as f64, 0.0)));
        let f = AnMember::new(PowerSeries::new(koebe).unwrap(), 1).unwrap();
        let est = starlikeness_order(&f, &grid).unwrap();
        // Re((1 - z)/(1 + z))-type ratio attains (1 - r)/(1 + r) at z = -r.
        assert!((est.value - (1.0 - 0.9) / (1.0 + 0.9)).abs() <= 1e-6);

        let mut half = vec![c(0.0, 0.0)];
        half.extend((1..=2048).map(|_| c(1.0, 0.0)));
        let f = AnMember::new(PowerSeries::new(half).unwrap(), 1).unwrap();
        let est = starlikeness_order(&f, &grid).unwrap();
        assert!((est.value - 1.0 / (1.0 + 0.9)).abs() <= 1e-6);
    }

    #[test]
    fn profile_deviation_and_order_are_consistent() {
        let f = an(&[(0.0, 0.0), (1.0, 0.0), (0.1, 0.05), (0.02, 0.0)], 1);
        let prof = starlike_profile(&f, &RadialGrid::default()).unwrap();
        // Re ratio >= 1 - |ratio - 1| pointwise, so order >= 1 - deviation.
        assert!(prof.order.value >= 1.0 - prof.deviation.value - 1e-12);
        assert!(prof.ladder_monotone);
    }

    #[test]
    fn inf_re_linear_case() {
        // Re(1 + 0.3 z) attains 1 - 0.3 r at z = -r.
        let p = series(&[(1.0, 0.0), (0.3, 0.0)]);
        let est = inf_re(&p, &RadialGrid::default());
        assert!((est.value - (1.0 - 0.3 * 0.999)).abs() <= 1e-12);
        assert_eq!(est.kind, BoundKind::Infimum);
        assert!((est.witness - c(-0.999, 0.0)).norm() <= 1e-2);
    }

    #[test]
    fn zero_on_circle_is_detected() {
        // f = z - z^2/0.9 vanishes at z = 0.9.
        let f = AnMember::new(series(&[(0.0, 0.0), (1.0, 0.0), (-1.0 / 0.9, 0.0)]), 1).unwrap();
        let grid = RadialGrid::new(vec![0.9], 4096).unwrap();
        assert!(matches!(
            starlikeness_order(&f, &grid),
            Err(Error::ZeroOnCircle { .. })
        ));
    }

    #[test]
    fn jack_witness_monomials_are_exact() {
        for (k, a) in [(1usize, 1.0), (2, 0.5), (3, 1.0), (5, -0.3)] {
            let mut coeffs = vec![c(0.0, 0.0); k + 1];
            coeffs[k] = c(a, 0.0);
            let w = PowerSeries::new(coeffs).unwrap();
            let est = jack_lemma_witness(&w, 0.9, 4096).unwrap();
            assert_eq!(est, c(k as f64, 0.0));
        }
    }

    #[test]
    fn jack_witness_closed_form() {
        // w = z + a z^2 peaks at z = r on the positive axis, where
        // z w'/w = (1 + 2 a r)/(1 + a r).
        let w = series(&[(0.0, 0.0), (1.0, 0.0), (0.5, 0.0)]);
        let est = jack_lemma_witness(&w, 0.9, 4096).unwrap();
        let r = 0.9;
        let expect = (1.0 + 2.0 * 0.5 * r) / (1.0 + 0.5 * r);
        assert!((est.re - expect).abs() <= 1e-9, "got {est}");
        assert!(est.im.abs() <= 1e-12);
        assert!(est.re >= 1.0);
    }

    #[test]
    fn grid_validation() {
        assert!(RadialGrid::new(vec![], 64).is_err());
        assert!(RadialGrid::new(vec![0.5, 0.5], 64).is_err());
        assert!(RadialGrid::new(vec![0.5, 0.4], 64).is_err());
        assert!(RadialGrid::new(vec![1.0], 64).is_err());
        assert!(RadialGrid::new(vec![0.9], 0).is_err());
        assert!(RadialGrid::new(vec![0.5, 0.9], 64).is_ok());
    }
}
