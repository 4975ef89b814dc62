//! Random configuration families for the falsification search.
//!
//! Draws are shaped so the hypothesis of the targeted criterion holds
//! by construction: function coefficients follow a decaying envelope
//! with rejection on the sampled hypothesis margin, and the lemma
//! configurations are assembled from explicit Schwarz-type numerators
//! whose coefficient mass stays below 1. Every trial consumes its own
//! deterministic substream, so a (seed, trial) pair always reproduces
//! the same report regardless of how many trials run around it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::disk::{subordinate_to_disk, RadialGrid};
use crate::series::{AnMember, H1nMember, PowerSeries};
use crate::{Error, Result};

/// Number of random deviation coefficients a draw fills in.
const DRAW_SPAN: usize = 8;

/// Redraw cap for hypothesis rejection sampling.
const MAX_REDRAWS: usize = 64;

/// Family of random members: f = z + a_{n+1} z^{n+1} + ... with
/// |a_{n+1+j}| <= coefficient_budget * 2^{-j}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilySpec {
    pub n: usize,
    pub coefficient_budget: f64,
    /// Default trial count when a search does not pass its own.
    pub count: usize,
    pub seed: u64,
}

impl FamilySpec {
    /// The budget is capped at 1/2: total coefficient mass then stays
    /// below 1, which keeps every member zero-free on the closed disk
    /// and the transform tails geometric.
    pub fn new(n: usize, coefficient_budget: f64, count: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !(1e-9..=0.5).contains(&coefficient_budget) {
            return Err(Error::InvalidParameter(format!(
                "coefficient budget {coefficient_budget} outside [1e-9, 0.5]"
            )));
        }
        if count == 0 {
            return Err(Error::InvalidParameter("count must be at least 1".into()));
        }
        Ok(Self {
            n,
            coefficient_budget,
            count,
            seed,
        })
    }

    /// Generator for one trial: the seed selects the key, the trial
    /// index selects the stream.
    pub fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial.wrapping_add(1));
        rng
    }
}

/// Uniform draw from the closed disk of the given radius.
fn draw_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.gen::<f64>();
    Complex64::from_polar(r, theta)
}

/// Member of the family: deviation coefficients drawn from disks of
/// radius budget * 2^{-j}. The leading coefficient is redrawn until it
/// clears the class threshold, so membership never degenerates.
pub fn draw_member(rng: &mut ChaCha8Rng, family: &FamilySpec, order: usize) -> Result<AnMember> {
    let n = family.n;
    let order = order.max(n + DRAW_SPAN);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[1] = Complex64::new(1.0, 0.0);
    for j in 0..DRAW_SPAN {
        let radius = family.coefficient_budget * 0.5f64.powi(j as i32);
        let mut a = draw_disk(rng, radius);
        if j == 0 {
            while a.norm() <= 1e-6 * radius {
                a = draw_disk(rng, radius);
            }
        }
        coeffs[n + 1 + j] = a;
    }
    AnMember::new(PowerSeries::new(coeffs)?, n)
}

/// Member draw with rejection on the subordination hypothesis
/// f'(z/f)^{1+mu} < 1 + lambda z: a coefficient-mass bound short-circuits
/// most draws, the rest are checked on the grid. If every redraw misses,
/// the last draw is returned as is and left to the verifier to classify.
pub fn draw_hypothesis_member(
    rng: &mut ChaCha8Rng,
    family: &FamilySpec,
    mu: Complex64,
    lambda: Complex64,
    order: usize,
    grid: &RadialGrid,
) -> Result<AnMember> {
    let l = lambda.norm();
    let mut f = draw_member(rng, family, order)?;
    for _ in 0..MAX_REDRAWS {
        let crit = f.criterion_expression(mu)?;
        // Mass above lambda does not refute subordination, it only
        // forfeits the shortcut.
        let mass: f64 = (1..=crit.order()).map(|k| crit.coeff(k).norm()).sum();
        if mass < l {
            return Ok(f);
        }
        if subordinate_to_disk(&crit, lambda, grid).envelope_margin > 0.0 {
            return Ok(f);
        }
        f = draw_member(rng, family, order)?;
    }
    Ok(f)
}

/// Schwarz-type numerator with an n-fold zero: DRAW_SPAN coefficients
/// under a 2^{-j} envelope, rescaled so the total coefficient mass is a
/// uniform fraction of `mass_cap`. Mass below 1 gives |w(z)| < |z|^n
/// pointwise, the shape every subordination hypothesis here needs.
pub fn draw_schwarz_numerator(
    rng: &mut ChaCha8Rng,
    n: usize,
    mass_cap: f64,
    order: usize,
) -> PowerSeries {
    assert!(mass_cap > 0.0 && mass_cap < 1.0, "mass cap must lie in (0, 1)");
    let order = order.max(n + DRAW_SPAN - 1);
    let mut raw: Vec<Complex64> = Vec::with_capacity(DRAW_SPAN);
    for j in 0..DRAW_SPAN {
        let mut a = draw_disk(rng, 0.5f64.powi(j as i32));
        if j == 0 {
            while a.norm() <= 1e-3 {
                a = draw_disk(rng, 1.0);
            }
        }
        raw.push(a);
    }
    let total: f64 = raw.iter().map(|c| c.norm()).sum();
    let fraction = 0.4 + 0.6 * rng.gen::<f64>();
    let scale = mass_cap * fraction / total;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    for (j, a) in raw.iter().enumerate() {
        coeffs[n + j] = a * scale;
    }
    PowerSeries::new(coeffs).expect("coefficients are finite by construction")
}

/// Inverse of the subordination-transfer hypothesis map: given a random
/// Schwarz numerator w, returns the p with p - z p'/mu = 1 + lambda w,
/// coefficientwise p_k = lambda w_k mu / (mu - k). A mu within 1e-9 of
/// a positive integer makes the inversion resonate.
pub fn draw_lemma21_p(
    rng: &mut ChaCha8Rng,
    family: &FamilySpec,
    mu: Complex64,
    lambda: Complex64,
    order: usize,
) -> Result<H1nMember> {
    let w = draw_schwarz_numerator(rng, family.n, family.coefficient_budget, order);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); w.order() + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    for k in 1..=w.order() {
        let wk = w.coeff(k);
        if wk.norm() == 0.0 {
            continue;
        }
        let den = mu - Complex64::new(k as f64, 0.0);
        if den.norm() <= 1e-9 {
            return Err(Error::Resonance { k });
        }
        coeffs[k] = lambda * wk * mu / den;
    }
    H1nMember::new(PowerSeries::new(coeffs)?, family.n)
}

/// Configuration for the half-plane conclusion: Q = 1 + l1 w1 and the p
/// recovered from a random product 1 + l w0 = Q [alpha + (1 - alpha) p].
/// Both subordination hypotheses hold by construction; the numerator of
/// Q runs at mass 0.9 to stress the near-extremal region.
pub fn draw_lemma22_part1(
    rng: &mut ChaCha8Rng,
    family: &FamilySpec,
    l: f64,
    l1: f64,
    alpha: f64,
    order: usize,
) -> Result<(H1nMember, H1nMember)> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} outside [0, 1)"
        )));
    }
    let n = family.n;
    let w0 = draw_schwarz_numerator(rng, n, family.coefficient_budget, order);
    let w1 = draw_schwarz_numerator(rng, n, 0.9, order);
    let ord = w0.order();
    let one = PowerSeries::one(ord);
    let product = one.add(&w0.scale(Complex64::new(l, 0.0)));
    let q = one.add(&w1.scale(Complex64::new(l1, 0.0)));
    let ratio = product.mul(&q.reciprocal()?);
    let p = ratio
        .sub(&PowerSeries::constant(Complex64::new(alpha, 0.0), ord))
        .scale(Complex64::new(1.0 / (1.0 - alpha), 0.0));
    Ok((H1nMember::new(q, n)?, H1nMember::new(p, n)?))
}

/// Configuration for the Schwarz-bound conclusion: Q = 1 + l1 w1 and
/// the implied w = (1 + l w0)/Q - 1, which vanishes to order n.
pub fn draw_lemma22_part2(
    rng: &mut ChaCha8Rng,
    family: &FamilySpec,
    l: f64,
    l1: f64,
    order: usize,
) -> Result<(H1nMember, PowerSeries)> {
    let n = family.n;
    let w0 = draw_schwarz_numerator(rng, n, family.coefficient_budget, order);
    let w1 = draw_schwarz_numerator(rng, n, 0.9, order);
    let ord = w0.order();
    let one = PowerSeries::one(ord);
    let product = one.add(&w0.scale(Complex64::new(l, 0.0)));
    let q = one.add(&w1.scale(Complex64::new(l1, 0.0)));
    let w = product.mul(&q.reciprocal()?).sub(&one);
    Ok((H1nMember::new(q, n)?, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::CONSTANT_TERM_EPS;

    fn family(n: usize, budget: f64) -> FamilySpec {
        FamilySpec::new(n, budget, 100, 42).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(FamilySpec::new(0, 0.3, 10, 1).is_err());
        assert!(FamilySpec::new(1, 0.0, 10, 1).is_err());
        assert!(FamilySpec::new(1, 0.6, 10, 1).is_err());
        assert!(FamilySpec::new(1, 0.3, 0, 1).is_err());
        assert!(FamilySpec::new(2, 0.5, 10, 1).is_ok());
    }

    #[test]
    fn trials_are_deterministic_and_distinct() {
        let fam = family(1, 0.3);
        let a = draw_member(&mut fam.trial_rng(7), &fam, 32).unwrap();
        let b = draw_member(&mut fam.trial_rng(7), &fam, 32).unwrap();
        let c = draw_member(&mut fam.trial_rng(8), &fam, 32).unwrap();
        assert_eq!(a.series().coeffs(), b.series().coeffs());
        assert_ne!(a.series().coeffs(), c.series().coeffs());
    }

    #[test]
    fn member_respects_envelope() {
        let fam = family(2, 0.4);
        for trial in 0..20 {
            let f = draw_member(&mut fam.trial_rng(trial), &fam, 32).unwrap();
            assert_eq!(f.n(), 2);
            for j in 0..8 {
                let a = f.series().coeff(3 + j);
                assert!(a.norm() <= 0.4 * 0.5f64.powi(j as i32) + 1e-15, "j = {j}");
            }
            assert!(f.series().coeff(3).norm() > 0.0);
        }
    }

    #[test]
    fn schwarz_numerator_shape() {
        let fam = family(3, 0.5);
        for trial in 0..20 {
            let w = draw_schwarz_numerator(&mut fam.trial_rng(trial), 3, 0.8, 32);
            for k in 0..3 {
                assert!(w.coeff(k).norm() <= CONSTANT_TERM_EPS, "k = {k}");
            }
            assert!(w.coeff(3).norm() > 0.0);
            let mass: f64 = (0..=w.order()).map(|k| w.coeff(k).norm()).sum();
            assert!(mass <= 0.8 + 1e-12);
            assert!(mass >= 0.8 * 0.4 - 1e-12);
        }
    }

    #[test]
    fn lemma21_inversion_reproduces_hypothesis_shape() {
        let fam = family(2, 0.45);
        let mu = Complex64::new(0.3, 0.4);
        let lambda = Complex64::new(0.5, 0.0);
        for trial in 0..10 {
            let p = draw_lemma21_p(&mut fam.trial_rng(trial), &fam, mu, lambda, 32).unwrap();
            // Reassemble p - z p'/mu; its deviation mass must sit under
            // |lambda| * cap, and the first n - 1 coefficients vanish.
            let hyp = p
                .series()
                .sub(&p.series().derivative().mul_z().scale(Complex64::new(1.0, 0.0) / mu));
            assert!((hyp.coeff(0) - Complex64::new(1.0, 0.0)).norm() <= 1e-14);
            assert!(hyp.coeff(1).norm() <= 1e-14);
            let mass: f64 = (1..=hyp.order()).map(|k| hyp.coeff(k).norm()).sum();
            assert!(mass <= 0.5 * 0.45 + 1e-12, "mass = {mass}");
        }
    }

    #[test]
    fn lemma21_resonance_is_reported() {
        let fam = family(1, 0.3);
        let got = draw_lemma21_p(
            &mut fam.trial_rng(0),
            &fam,
            Complex64::new(3.0, 0.0),
            Complex64::new(0.5, 0.0),
            32,
        );
        assert!(matches!(got, Err(Error::Resonance { .. })));
    }

    #[test]
    fn hypothesis_rejection_yields_subordinate_draws() {
        let fam = family(1, 0.2);
        let mu = Complex64::new(0.25, 0.0);
        let lambda = Complex64::new(0.5, 0.0);
        let grid = RadialGrid::new(vec![0.9, 0.999], 512).unwrap();
        for trial in 0..10 {
            let f = draw_hypothesis_member(&mut fam.trial_rng(trial), &fam, mu, lambda, 32, &grid)
                .unwrap();
            let chk = subordinate_to_disk(&f.criterion_expression(mu).unwrap(), lambda, &grid);
            assert!(chk.envelope_margin > 0.0);
        }
    }

    #[test]
    fn lemma22_draws_build_valid_configurations() {
        let fam = family(1, 0.4);
        let (l, l1) = (0.5, 0.25);
        let alpha = 0.4;
        for trial in 0..10 {
            let (q, p) =
                draw_lemma22_part1(&mut fam.trial_rng(trial), &fam, l, l1, alpha, 32).unwrap();
            assert_eq!(q.n(), 1);
            // The product Q [alpha + (1 - alpha) p] must sit inside 1 + l z.
            let affine = p
                .series()
                .scale(Complex64::new(1.0 - alpha, 0.0))
                .add(&PowerSeries::constant(Complex64::new(alpha, 0.0), p.series().order()));
            let product = q.series().mul(&affine);
            let grid = RadialGrid::new(vec![0.999], 512).unwrap();
            let chk = subordinate_to_disk(&product, Complex64::new(l, 0.0), &grid);
            assert!(chk.envelope_margin > 0.0, "trial {trial}");

            let (q2, w) =
                draw_lemma22_part2(&mut fam.trial_rng(trial), &fam, 0.4, 0.2, 32).unwrap();
            assert!(w.coeff(0).norm() <= CONSTANT_TERM_EPS);
            assert!(q2.series().coeff(0).norm() > 0.0);
        }
    }
}
