//! Built-in function library: the handful of closed-form members every
//! example and anchor test uses. Truncation order is the caller's
//! problem; boundary-hugging anchors (half-plane, Koebe) need orders in
//! the tens of thousands before r = 0.999 estimates settle.

use num_complex::Complex64;

use crate::criteria::lambda1_bound;
use crate::series::{AnMember, H1nMember, PowerSeries};
use crate::Result;

/// f(z) = z, the degenerate member every criterion holds for.
pub fn identity(order: usize) -> AnMember {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order.max(1) + 1];
    coeffs[1] = Complex64::new(1.0, 0.0);
    AnMember::new(PowerSeries::new(coeffs).unwrap(), 1).unwrap()
}

/// Koebe function z/(1-z)^2 = sum k z^k, extremal for starlikeness.
pub fn koebe(order: usize) -> AnMember {
    let mut coeffs = vec![Complex64::new(0.0, 0.0)];
    coeffs.extend((1..=order.max(2)).map(|k| Complex64::new(k as f64, 0.0)));
    AnMember::new(PowerSeries::new(coeffs).unwrap(), 1).unwrap()
}

/// Half-plane map z/(1-z) = sum z^k, starlike of order 1/2.
pub fn halfplane(order: usize) -> AnMember {
    let mut coeffs = vec![Complex64::new(0.0, 0.0)];
    coeffs.extend((1..=order.max(2)).map(|_| Complex64::new(1.0, 0.0)));
    AnMember::new(PowerSeries::new(coeffs).unwrap(), 1).unwrap()
}

/// f(z) = z + a z^{n+1}.
pub fn one_term(a: Complex64, n: usize, order: usize) -> Result<AnMember> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order.max(n + 1) + 1];
    coeffs[1] = Complex64::new(1.0, 0.0);
    coeffs[n + 1] = a;
    AnMember::new(PowerSeries::new(coeffs)?, n)
}

/// The extremal member of the first lemma: p = 1 + lambda1 z^n with
/// lambda1 = |lambda| |mu| / |n - mu| taken real positive. Its
/// hypothesis expression p - z p'/mu has the single deviation
/// coefficient lambda1 (mu - n)/mu of modulus exactly |lambda|, so both
/// hypothesis and conclusion sit on their boundaries.
pub fn extremal_p(lambda: Complex64, mu: Complex64, n: usize, order: usize) -> Result<H1nMember> {
    let l1 = lambda1_bound(lambda, mu, n)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order.max(n) + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    coeffs[n] = Complex64::new(l1, 0.0);
    H1nMember::new(PowerSeries::new(coeffs)?, n)
}
