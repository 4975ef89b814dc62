//! Truncated power series over the complex numbers.
//!
//! A [`PowerSeries`] stores dense coefficients c_0..c_N of an analytic
//! germ at the origin. All arithmetic truncates to the shorter operand,
//! so an order-N result is exact in every retained coefficient: the
//! recurrences for products, reciprocals, logs, exponentials and complex
//! powers are triangular and never look past index k when producing c_k.
//!
//! The two wrapper types pin the normalizations the starlikeness
//! criteria work with: [`AnMember`] for f(z) = z + a_{n+1} z^{n+1} + ...
//! and [`H1nMember`] for p(z) = 1 + p_n z^n + ... .

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Constant terms smaller than this are treated as zero when a division
/// or branch choice depends on them.
pub const CONSTANT_TERM_EPS: f64 = 1e-12;

/// Default truncation order for series built by the CLI and the harness.
pub const DEFAULT_ORDER: usize = 64;

/// Dense truncated power series: coefficients of z^0 .. z^N, N >= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Builds a series from dense coefficients. Pads to order 1 if fewer
    /// than two coefficients are given; rejects non-finite entries.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        for (k, c) in coeffs.iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::InvalidSeries(format!(
                    "non-finite coefficient at index {k}"
                )));
            }
        }
        while coeffs.len() < 2 {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Constant series c0 at the given order.
    pub fn constant(c0: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order.max(1) + 1];
        coeffs[0] = c0;
        Self { coeffs }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), order)
    }

    /// c z^k at the given order (order is raised to k if needed).
    pub fn monomial(c: Complex64, k: usize, order: usize) -> Self {
        let n = order.max(k).max(1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    /// Truncation order N (the series has N + 1 coefficients).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Truncates or zero-pads to the given order (at least 1).
    pub fn with_order(&self, order: usize) -> Self {
        let n = order.max(1);
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n + 1, Complex64::new(0.0, 0.0));
        coeffs.truncate(n + 1);
        Self { coeffs }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    /// Coefficient-wise sum truncated to the shorter operand.
    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect();
        Self { coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Cauchy product truncated to the shorter operand.
    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        for k in 0..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=k {
                acc += self.coeffs[j] * rhs.coeffs[k - j];
            }
            coeffs[k] = acc;
        }
        Self { coeffs }
    }

    /// Termwise derivative. The order drops by one but never below 1.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let m = (n - 1).max(1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); m + 1];
        for k in 1..=n {
            if k - 1 <= m {
                coeffs[k - 1] = self.coeffs[k] * (k as f64);
            }
        }
        Self { coeffs }
    }

    /// Multiplication by z: shifts coefficients up, order grows by one.
    pub fn mul_z(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Division by z for series with vanishing constant term.
    pub fn div_z(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.norm() > CONSTANT_TERM_EPS {
            return Err(Error::InvalidSeries(
                "division by z requires a vanishing constant term".into(),
            ));
        }
        let mut coeffs: Vec<Complex64> = self.coeffs[1..].to_vec();
        while coeffs.len() < 2 {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Ok(Self { coeffs })
    }

    /// Multiplicative inverse. Requires |c0| > 1e-12.
    ///
    /// r_0 = 1/c_0, then r_k = -(1/c_0) * sum_{j=1..k} c_j r_{k-j}.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.norm() <= CONSTANT_TERM_EPS {
            return Err(Error::ZeroConstantTerm { modulus: c0.norm() });
        }
        let n = self.order();
        let inv = Complex64::new(1.0, 0.0) / c0;
        let mut r = vec![Complex64::new(0.0, 0.0); n + 1];
        r[0] = inv;
        for k in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * r[k - j];
            }
            r[k] = -inv * acc;
        }
        Ok(Self { coeffs: r })
    }

    /// Logarithm of a series with constant term 1 (within 1e-12). The
    /// constant term of the result is the principal log of c0, so the
    /// round trip exp(log f) reproduces f including any c0 dust.
    ///
    /// g_k = (f_k - (1/k) * sum_{j=1..k-1} j g_j f_{k-j}) / f_0.
    pub fn log(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if (c0 - Complex64::new(1.0, 0.0)).norm() > CONSTANT_TERM_EPS {
            return Err(Error::NonUnitConstantTerm { re: c0.re, im: c0.im });
        }
        let n = self.order();
        let inv = Complex64::new(1.0, 0.0) / c0;
        let mut g = vec![Complex64::new(0.0, 0.0); n + 1];
        g[0] = c0.ln();
        for k in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..k {
                acc += g[j] * self.coeffs[k - j] * (j as f64);
            }
            g[k] = (self.coeffs[k] - acc / (k as f64)) * inv;
        }
        Ok(Self { coeffs: g })
    }

    /// Exponential: h_0 = exp(g_0), h_k = (1/k) * sum_{j=1..k} j g_j h_{k-j}.
    pub fn exp(&self) -> Self {
        let n = self.order();
        let mut h = vec![Complex64::new(0.0, 0.0); n + 1];
        h[0] = self.coeffs[0].exp();
        for k in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * h[k - j] * (j as f64);
            }
            h[k] = acc / (k as f64);
        }
        Self { coeffs: h }
    }

    /// Principal power f^mu = exp(mu log f) for series with constant
    /// term 1. Branch-free: the log starts at 0, no winding can occur
    /// at the formal level.
    pub fn cpow(&self, mu: Complex64) -> Result<Self> {
        Ok(self.log()?.scale(mu).exp())
    }

    /// Horner evaluation at a point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Largest index with a coefficient above the zero threshold, if any.
    pub fn top_nonzero(&self) -> Option<usize> {
        (0..=self.order()).rev().find(|&k| self.coeffs[k].norm() > CONSTANT_TERM_EPS)
    }
}

impl Serialize for PowerSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        let coeffs = pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        PowerSeries::new(coeffs).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Member of the normalized class A_n: f(z) = z + a_{n+1} z^{n+1} + ... .
///
/// The constructor checks c_0 = 0, c_1 = 1 and c_2 = ... = c_n = 0 to
/// within 1e-12, and that a_{n+1} is nonzero unless every deviation
/// coefficient vanishes (the identity f = z is admitted as the
/// degenerate member every criterion trivially holds for).
#[derive(Debug, Clone)]
pub struct AnMember {
    series: PowerSeries,
    n: usize,
}

impl AnMember {
    pub fn new(series: PowerSeries, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        let eps = CONSTANT_TERM_EPS;
        if series.coeff(0).norm() > eps {
            return Err(Error::InvalidSeries("f(0) must be 0".into()));
        }
        if (series.coeff(1) - Complex64::new(1.0, 0.0)).norm() > eps {
            return Err(Error::InvalidSeries("f'(0) must be 1".into()));
        }
        for k in 2..=n.min(series.order()) {
            if series.coeff(k).norm() > eps {
                return Err(Error::InvalidSeries(format!(
                    "coefficient {k} must vanish for membership with index n = {n}"
                )));
            }
        }
        if series.coeff(n + 1).norm() <= eps {
            let degenerate = (n + 1..=series.order()).all(|k| series.coeff(k).norm() <= eps);
            if !degenerate {
                return Err(Error::InvalidSeries(format!(
                    "leading deviation coefficient a_{} must be nonzero",
                    n + 1
                )));
            }
        }
        Ok(Self { series, n })
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// z / f(z) as a power series: reciprocal of f/z. The result has
    /// constant term 1 and vanishing coefficients 1..n-1.
    pub fn z_over_f(&self) -> Result<PowerSeries> {
        self.series.div_z()?.reciprocal()
    }

    /// The subordination expression f'(z) (z/f(z))^(1+mu).
    ///
    /// Constant term 1; the leading deviation coefficient at z^n equals
    /// (n - mu) a_{n+1}.
    pub fn criterion_expression(&self, mu: Complex64) -> Result<PowerSeries> {
        let zf = self.z_over_f()?;
        let pow = zf.cpow(Complex64::new(1.0, 0.0) + mu)?;
        Ok(self.series.derivative().mul(&pow))
    }
}

/// Member of H[1, n]: p(z) = 1 + p_n z^n + ... (constant term 1, the
/// next n-1 coefficients zero).
#[derive(Debug, Clone)]
pub struct H1nMember {
    series: PowerSeries,
    n: usize,
}

impl H1nMember {
    pub fn new(series: PowerSeries, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        let eps = CONSTANT_TERM_EPS;
        if (series.coeff(0) - Complex64::new(1.0, 0.0)).norm() > eps {
            return Err(Error::InvalidSeries("p(0) must be 1".into()));
        }
        for k in 1..n.min(series.order() + 1) {
            if series.coeff(k).norm() > eps {
                return Err(Error::InvalidSeries(format!(
                    "coefficient {k} must vanish for membership with index n = {n}"
                )));
            }
        }
        Ok(Self { series, n })
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_coeff_dev(a: &PowerSeries, b: &PowerSeries) -> f64 {
        let n = a.order().min(b.order());
        (0..=n).map(|k| (a.coeff(k) - b.coeff(k)).norm()).fold(0.0, f64::max)
    }

    // Degree-bounded polynomials embedded in higher-order series make the
    // pointwise product oracle exact: no truncated tail can leak in.
    fn poly_a() -> PowerSeries {
        PowerSeries::new(vec![
            c(1.0, 0.5), c(-0.3, 0.2), c(0.7, -0.1), c(0.0, 0.4),
            c(-0.2, -0.2), c(0.1, 0.0), c(0.05, -0.3),
        ])
        .unwrap()
        .with_order(24)
    }

    fn poly_b() -> PowerSeries {
        PowerSeries::new(vec![
            c(0.4, -1.0), c(0.9, 0.1), c(-0.5, 0.5), c(0.2, 0.2), c(0.3, -0.6),
        ])
        .unwrap()
        .with_order(24)
    }

    #[test]
    fn mul_matches_pointwise_evaluation() {
        let (a, b) = (poly_a(), poly_b());
        let prod = a.mul(&b);
        for j in 0..32 {
            let th = std::f64::consts::TAU * (j as f64) / 32.0;
            let z = Complex64::from_polar(0.5, th);
            let dev = (prod.eval(z) - a.eval(z) * b.eval(z)).norm();
            assert!(dev <= 1e-12, "j = {j}, dev = {dev:.3e}");
        }
    }

    #[test]
    fn mul_truncates_to_shorter_operand() {
        let a = poly_a();
        let b = poly_b().with_order(6);
        assert_eq!(a.mul(&b).order(), 6);
        assert_eq!(b.mul(&a).order(), 6);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let a = poly_a();
        let d = a.derivative();
        let h = 1e-5;
        let z = c(0.3, 0.1);
        for dir in [c(1.0, 0.0), c(0.0, 1.0)] {
            let fd = (a.eval(z + dir * h) - a.eval(z - dir * h)) / (2.0 * h) / dir;
            assert!((d.eval(z) - fd).norm() <= 1e-8);
        }
    }

    #[test]
    fn derivative_of_order_one_keeps_order_one() {
        let a = PowerSeries::new(vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let d = a.derivative();
        assert_eq!(d.order(), 1);
        assert_eq!(d.coeff(0), c(2.0, 0.0));
        assert_eq!(d.coeff(1), c(0.0, 0.0));
    }

    #[test]
    fn reciprocal_round_trip() {
        let a = poly_a();
        let r = a.reciprocal().unwrap();
        let prod = a.mul(&r);
        assert!((prod.coeff(0) - c(1.0, 0.0)).norm() <= 1e-12);
        for k in 1..=prod.order() {
            assert!(prod.coeff(k).norm() <= 1e-12, "k = {k}");
        }
    }

    #[test]
    fn reciprocal_rejects_vanishing_constant_term() {
        let a = PowerSeries::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(a.reciprocal(), Err(Error::ZeroConstantTerm { .. })));
    }

    #[test]
    fn log_exp_round_trip() {
        let f = PowerSeries::new(vec![c(1.0, 0.0), c(0.4, -0.2), c(-0.1, 0.3), c(0.2, 0.05)])
            .unwrap()
            .with_order(32);
        let back = f.log().unwrap().exp();
        assert!(max_coeff_dev(&f, &back) <= 1e-11);
    }

    #[test]
    fn log_rejects_non_unit_constant_term() {
        let f = PowerSeries::new(vec![c(0.9, 0.0), c(0.1, 0.0)]).unwrap();
        assert!(matches!(f.log(), Err(Error::NonUnitConstantTerm { .. })));
    }

    #[test]
    fn cpow_matches_pointwise_principal_power() {
        // Values of f on |z| = 0.4 stay near 1, so the principal branch

        // agrees with the formal series branch.
        let f = PowerSeries::new(vec![c(1.0, 0.0), c(0.3, 0.0), c(0.1, 0.0)])
            .unwrap()
            .with_order(64);
        for mu in [c(0.0, 1.0), c(0.5, -0.25), c(-2.0, 0.3)] {
            let g = f.cpow(mu).unwrap();
            for j in 0..64 {
                let th = std::f64::consts::TAU * (j as f64) / 64.0;
                let z = Complex64::from_polar(0.4, th);
                let direct = (f.eval(z).ln() * mu).exp();
                assert!((g.eval(z) - direct).norm() <= 1e-10, "mu = {mu}, j = {j}");
            }
        }
    }

    #[test]
    fn cpow_binomial_coefficients() {
        // (1 + z)^mu has coefficients mu (mu-1) ... (mu-k+1) / k!.
        let f = PowerSeries::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap().with_order(12);
        let mu = c(0.5, 1.5);
        let g = f.cpow(mu).unwrap();
        let mut expect = c(1.0, 0.0);
        for k in 0..=12 {
            assert!((g.coeff(k) - expect).norm() <= 1e-12 * expect.norm().max(1.0));
            expect *= (mu - c(k as f64, 0.0)) / c(k as f64 + 1.0, 0.0);
        }
    }

    #[test]
    fn z_over_f_geometric_closed_form() {
        // f = z + a z^{n+1} gives z/f = sum_j (-a)^j z^{jn}.
        for (n, a) in [(1usize, c(0.2, 0.1)), (3, c(-0.15, 0.25))] {
            let mut coeffs = vec![c(0.0, 0.0); 25];
            coeffs[1] = c(1.0, 0.0);
            coeffs[n + 1] = a;
            let f = AnMember::new(PowerSeries::new(coeffs).unwrap(), n).unwrap();
            let zf = f.z_over_f().unwrap();
            let mut expect = c(1.0, 0.0);
            let mut k = 0;
            while k <= zf.order() {
                assert!((zf.coeff(k) - expect).norm() <= 1e-13, "n = {n}, k = {k}");
                for m in k + 1..(k + n).min(zf.order() + 1) {
                    assert!(zf.coeff(m).norm() <= 1e-13);
                }
                expect *= -a;
                k += n;
            }
        }
    }

    #[test]
    fn criterion_expression_leading_coefficient() {
        // f' (z/f)^(1+mu) = 1 + (n - mu) a_{n+1} z^n + O(z^{n+1}).
        for (n, mu, a) in [
            (1usize, c(0.5, 0.0), c(0.1, 0.0)),
            (2, c(0.3, -0.7), c(-0.05, 0.12)),
            (3, c(-1.0, 0.4), c(0.02, 0.03)),
        ] {
            let mut coeffs = vec![c(0.0, 0.0); 33];
            coeffs[1] = c(1.0, 0.0);
            coeffs[n + 1] = a;
            let f = AnMember::new(PowerSeries::new(coeffs).unwrap(), n).unwrap();
            let expr = f.criterion_expression(mu).unwrap();
            assert!((expr.coeff(0) - c(1.0, 0.0)).norm() <= 1e-13);
            for k in 1..n {
                assert!(expr.coeff(k).norm() <= 1e-13);
            }
            let expect = (c(n as f64, 0.0) - mu) * a;
            assert!((expr.coeff(n) - expect).norm() <= 1e-12, "n = {n}");
        }
    }

    #[test]
    fn an_member_validation() {
        let ok = PowerSeries::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.3, 0.0)]).unwrap();
        assert!(AnMember::new(ok.clone(), 2).is_ok());
        // a_2 = 0 but a_3 != 0 is not a valid member for n = 1.
        assert!(AnMember::new(ok, 1).is_err());
        let identity = PowerSeries::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(AnMember::new(identity, 1).is_ok());
        let bad0 = PowerSeries::new(vec![c(0.1, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(AnMember::new(bad0, 1).is_err());
    }

    #[test]
    fn h1n_member_validation() {
        let p = PowerSeries::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.4, 0.0)]).unwrap();
        assert!(H1nMember::new(p.clone(), 2).is_ok());
        assert!(H1nMember::new(p, 1).is_ok());
        let q = PowerSeries::new(vec![c(1.0, 0.0), c(0.2, 0.0)]).unwrap();
        assert!(H1nMember::new(q, 2).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let a = poly_a();
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.starts_with("[["));
        let b: PowerSeries = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn small_coeff() -> impl Strategy<Value = Complex64> {
            (-0.2f64..0.2, -0.2f64..0.2).prop_map(|(re, im)| Complex64::new(re, im))
        }

        fn small_poly(deg: usize) -> impl Strategy<Value = PowerSeries> {
            proptest::collection::vec(small_coeff(), 1..=deg)
                .prop_map(|v| PowerSeries::new(v).unwrap().with_order(32))
        }

        fn unit_poly(deg: usize) -> impl Strategy<Value = PowerSeries> {
            proptest::collection::vec(small_coeff(), 1..=deg).prop_map(|v| {
                let mut coeffs = vec![Complex64::new(1.0, 0.0)];
                coeffs.extend(v);
                PowerSeries::new(coeffs).unwrap().with_order(32)
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn distributes_over_addition(a in small_poly(8), b in small_poly(8), f in small_poly(8)) {
                let lhs = a.add(&b).mul(&f);
                let rhs = a.mul(&f).add(&b.mul(&f));
                prop_assert!(super::max_coeff_dev(&lhs, &rhs) <= 1e-12);
            }

            #[test]
            fn multiplication_commutes_and_associates(a in small_poly(8), b in small_poly(8), f in small_poly(8)) {
                prop_assert!(super::max_coeff_dev(&a.mul(&b), &b.mul(&a)) <= 1e-14);
                let lhs = a.mul(&b).mul(&f);
                let rhs = a.mul(&b.mul(&f));
                prop_assert!(super::max_coeff_dev(&lhs, &rhs) <= 1e-12);
            }

            #[test]
            fn cpow_is_additive_in_the_exponent(
                f in unit_poly(6),
                are in -1.5f64..1.5, aim in -1.5f64..1.5,
                bre in -1.5f64..1.5, bim in -1.5f64..1.5,
            ) {
                let a = Complex64::new(are, aim);
                let b = Complex64::new(bre, bim);
                let lhs = f.cpow(a).unwrap().mul(&f.cpow(b).unwrap());
                let rhs = f.cpow(a + b).unwrap();
                prop_assert!(super::max_coeff_dev(&lhs, &rhs) <= 1e-10);
            }

            #[test]
            fn exp_log_round_trip(f in unit_poly(6)) {
                let back = f.log().unwrap().exp();
                prop_assert!(super::max_coeff_dev(&f, &back) <= 1e-11);
            }

            #[test]
            fn criterion_expression_matches_direct_arithmetic(
                n in 1usize..=3,
                coeffs in proptest::collection::vec(small_coeff(), 1..=5),
                mure in -0.9f64..0.9, muim in -0.9f64..0.9,
            ) {
                // Deviation coefficients decay fast enough that f(z)/z stays
                // in the right half-plane for |z| <= 0.5 and the truncated
                // tail is far below the tolerance.
                let mu = Complex64::new(mure, muim);
                let mut cs = vec![Complex64::new(0.0, 0.0); 33];
                cs[1] = Complex64::new(1.0, 0.0);
                let mut nonzero = false;
                for (j, a) in coeffs.iter().enumerate() {
                    let scaled = a * 0.5 * 0.6f64.powi(j as i32);
                    if j == 0 && scaled.norm() <= 1e-9 {
                        continue;
                    }
                    cs[n + 1 + j] = scaled;
                    nonzero = true;
                }
                prop_assume!(nonzero);
                let f = AnMember::new(PowerSeries::new(cs).unwrap(), n).unwrap();
                let expr = f.criterion_expression(mu).unwrap();
                let fser = f.series().clone();
                let fder = fser.derivative();
                for j in 0..16 {
                    let th = std::f64::consts::TAU * (j as f64) / 16.0 + 0.05;
                    let z = Complex64::from_polar(0.5, th);
                    let w = z / fser.eval(z);
                    let direct = fder.eval(z) * (w.ln() * (Complex64::new(1.0, 0.0) + mu)).exp();
                    prop_assert!((expr.eval(z) - direct).norm() <= 1e-9);
                }
            }
        }
    }
}
