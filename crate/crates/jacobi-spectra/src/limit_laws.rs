//! The three limit laws of the ensemble family: semicircle, Marchenko-Pastur
//! and Kesten-McKay. Closed-form densities, support edges, Stieltjes
//! transforms, quadrature moments and the CLT variance functional.
//!
//! Quadrature uses the substitution `x = c + r sin(theta)` which turns the
//! square-root edge factor into `r cos(theta)` and leaves a smooth integrand;
//! for Kesten-McKay laws with an edge pinned at 0 or 1 the matching pole of
//! `1/(x(1-x))` is cancelled symbolically before evaluation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::quadrature::default_rule;

/// A limit law for spectral measures, tagged by ensemble family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitLaw {
    /// Semicircle distribution on `[-2, 2]`.
    Semicircle,
    /// Marchenko-Pastur distribution, aspect ratio `gamma` in `(0, 1)`.
    MarchenkoPastur { gamma: f64 },
    /// Kesten-McKay distribution parameterized by `(kappa_a, kappa_b)`; the
    /// support edges `u_-`, `u_+` are derived.
    KestenMcKay { kappa_a: f64, kappa_b: f64 },
}

/// Entries of the non-random limit Jacobi matrix: first diagonal/off-diagonal
/// entry and the repeating bulk values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitEntries {
    pub first_diag: f64,
    pub first_offdiag: f64,
    pub bulk_diag: f64,
    pub bulk_offdiag: f64,
}

impl LimitLaw {
    pub fn semicircle() -> Self {
        LimitLaw::Semicircle
    }

    /// `gamma` must lie strictly inside `(0, 1)`; the hard-edge case
    /// `gamma = 1` is rejected.
    pub fn marchenko_pastur(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0 && gamma < 1.0) {
            return Err(Error::parameter(format!(
                "Marchenko-Pastur gamma must lie in (0, 1), got {gamma}"
            )));
        }
        Ok(LimitLaw::MarchenkoPastur { gamma })
    }

    pub fn kesten_mckay(kappa_a: f64, kappa_b: f64) -> Result<Self> {
        if !(kappa_a.is_finite() && kappa_a >= 0.0 && kappa_b.is_finite() && kappa_b >= 0.0) {
            return Err(Error::parameter(format!(
                "Kesten-McKay parameters must be finite and >= 0, got ({kappa_a}, {kappa_b})"
            )));
        }
        Ok(LimitLaw::KestenMcKay { kappa_a, kappa_b })
    }

    /// Support endpoints `(lower, upper)`.
    pub fn edges(&self) -> (f64, f64) {
        match *self {
            LimitLaw::Semicircle => (-2.0, 2.0),
            LimitLaw::MarchenkoPastur { gamma } => {
                let s = gamma.sqrt();
                ((1.0 - s) * (1.0 - s), (1.0 + s) * (1.0 + s))
            }
            LimitLaw::KestenMcKay { kappa_a, kappa_b } => {
                let t = 2.0 + kappa_a + kappa_b;
                let p = ((1.0 + kappa_a) * (1.0 + kappa_a + kappa_b)).sqrt();
                let q = (1.0 + kappa_b).sqrt();
                // pin the edges exactly when a kappa vanishes
                let lower = if kappa_a == 0.0 {
                    0.0
                } else {
                    ((p - q) / t).powi(2)
                };
                let upper = if kappa_b == 0.0 {
                    1.0
                } else {
                    ((p + q) / t).powi(2)
                };
                (lower, upper)
            }
        }
    }

    /// Pointwise density; 0 outside the open support interval.
    pub fn density(&self, x: f64) -> f64 {
        let (lo, hi) = self.edges();
        if !(x > lo && x < hi) {
            return 0.0;
        }
        let root = ((x - lo) * (hi - x)).sqrt();
        match *self {
            LimitLaw::Semicircle => root / (2.0 * std::f64::consts::PI),
            LimitLaw::MarchenkoPastur { gamma } => root / (2.0 * std::f64::consts::PI * gamma * x),
            LimitLaw::KestenMcKay { kappa_a, kappa_b } => {
                let t = 2.0 + kappa_a + kappa_b;
                t / (2.0 * std::f64::consts::PI) * root / (x * (1.0 - x))
            }
        }
    }

    /// `integral of g d(law)` by the 256-node edge-smoothed quadrature.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        let (lo, hi) = self.edges();
        let c = 0.5 * (hi + lo);
        let r = 0.5 * (hi - lo);
        let rule = default_rule();
        let half_pi = std::f64::consts::FRAC_PI_2;
        match *self {
            LimitLaw::Semicircle => rule.integrate(-half_pi, half_pi, |theta| {
                let (s, cos) = (theta.sin(), theta.cos());
                let x = c + r * s;
                g(x) * r * r * cos * cos / (2.0 * std::f64::consts::PI)
            }),
            LimitLaw::MarchenkoPastur { gamma } => rule.integrate(-half_pi, half_pi, |theta| {
                let (s, cos) = (theta.sin(), theta.cos());
                let x = c + r * s;
                g(x) * r * r * cos * cos / (2.0 * std::f64::consts::PI * gamma * x)
            }),
            LimitLaw::KestenMcKay { kappa_a, kappa_b } => {
                let t = 2.0 + kappa_a + kappa_b;
                let scale = t / (2.0 * std::f64::consts::PI);
                let lower_pinned = kappa_a == 0.0;
                let upper_pinned = kappa_b == 0.0;
                rule.integrate(-half_pi, half_pi, |theta| {
                    let (s, cos) = (theta.sin(), theta.cos());
                    let x = c + r * s;
                    // r^2 cos^2 / (x (1 - x)) with pinned-edge poles cancelled:
                    // x = r (1 + sin) when lo = 0, 1 - x = r (1 - sin) when hi = 1
                    let kernel = match (lower_pinned, upper_pinned) {
                        (false, false) => r * r * cos * cos / (x * (1.0 - x)),
                        (true, false) => r * (1.0 - s) / (1.0 - x),
                        (false, true) => r * (1.0 + s) / x,
                        (true, true) => 1.0,
                    };
                    g(x) * scale * kernel
                })
            }
        }
    }

    /// `integral of density(x) / (x - z) dx`; the quadrature route to the
    /// Stieltjes transform, used as an oracle against the closed forms.
    pub fn stieltjes_by_quadrature(&self, z: Complex64) -> Complex64 {
        let (lo, hi) = self.edges();
        let c = 0.5 * (hi + lo);
        let r = 0.5 * (hi - lo);
        let rule = default_rule();
        let half_pi = std::f64::consts::FRAC_PI_2;
        rule.integrate_complex(-half_pi, half_pi, |theta| {
            let x = c + r * theta.sin();
            let h = self.smooth_density_factor(theta);
            h / (Complex64::new(x, 0.0) - z)
        })
    }

    // density * dx/dtheta as a smooth function of theta, shared by the
    // complex quadrature path
    fn smooth_density_factor(&self, theta: f64) -> f64 {
        let (lo, hi) = self.edges();
        let c = 0.5 * (hi + lo);
        let r = 0.5 * (hi - lo);
        let (s, cos) = (theta.sin(), theta.cos());
        let x = c + r * s;
        match *self {
            LimitLaw::Semicircle => r * r * cos * cos / (2.0 * std::f64::consts::PI),
            LimitLaw::MarchenkoPastur { gamma } => {
                r * r * cos * cos / (2.0 * std::f64::consts::PI * gamma * x)
            }
            LimitLaw::KestenMcKay { kappa_a, kappa_b } => {
                let t = 2.0 + kappa_a + kappa_b;
                let scale = t / (2.0 * std::f64::consts::PI);
                let kernel = match (kappa_a == 0.0, kappa_b == 0.0) {
                    (false, false) => r * r * cos * cos / (x * (1.0 - x)),
                    (true, false) => r * (1.0 - s) / (1.0 - x),
                    (false, true) => r * (1.0 + s) / x,
                    (true, true) => 1.0,
                };
                scale * kernel
            }
        }
    }

    /// Closed-form Stieltjes transform `m(z)` for `Im z > 0`, branch chosen
    /// so that `Im m(z) > 0`.
    pub fn stieltjes(&self, z: Complex64) -> Result<Complex64> {
        let upper_half = z.im.is_finite() && z.im > 0.0;
        if !upper_half {
            return Err(Error::domain(format!(
                "stieltjes transform requires Im z > 0, got z = {z}"
            )));
        }
        let (lo, hi) = self.edges();
        // principal square roots of the two factors, each with argument in
        // (0, pi); flip the product if the Herglotz property fails
        let root = ((z - lo).sqrt()) * ((z - hi).sqrt());
        let m = self.stieltjes_with_root(z, root);
        if m.im > 0.0 {
            Ok(m)
        } else {
            Ok(self.stieltjes_with_root(z, -root))
        }
    }

    fn stieltjes_with_root(&self, z: Complex64, root: Complex64) -> Complex64 {
        match *self {
            LimitLaw::Semicircle => -0.5 * (z - root),
            LimitLaw::MarchenkoPastur { gamma } => (1.0 - gamma - z + root) / (2.0 * gamma * z),
            LimitLaw::KestenMcKay { kappa_a, kappa_b } => {
                let t = 2.0 + kappa_a + kappa_b;
                kappa_a / (2.0 * z) + kappa_b / (2.0 * (z - 1.0)) - t * root / (2.0 * z * (z - 1.0))
            }
        }
    }

    /// `k`-th moment of the law. `k = 0` is 1 by definition (these are
    /// probability laws; the quadrature mass is checked separately), higher
    /// moments go through the edge-smoothed quadrature.
    pub fn moment(&self, k: u32) -> f64 {
        if k == 0 {
            return 1.0;
        }
        self.integrate(|x| x.powi(k as i32))
    }

    /// CLT variance functional `sigma^2(f) = <law, f^2> - <law, f>^2`,
    /// computed from the quadrature moments of the coefficient expansion.
    pub fn variance_functional(&self, f: &Polynomial) -> f64 {
        let mean: f64 = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, &c)| c * self.moment(k as u32))
            .sum();
        let mean_sq: f64 = f
            .square()
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, &c)| c * self.moment(k as u32))
            .sum();
        mean_sq - mean * mean
    }

    /// Entries of the limit Jacobi matrix associated with the law.
    pub fn limit_entries(&self) -> LimitEntries {
        match *self {
            LimitLaw::Semicircle => LimitEntries {
                first_diag: 0.0,
                first_offdiag: 1.0,
                bulk_diag: 0.0,
                bulk_offdiag: 1.0,
            },
            LimitLaw::MarchenkoPastur { gamma } => LimitEntries {
                first_diag: 1.0,
                first_offdiag: gamma.sqrt(),
                bulk_diag: 1.0 + gamma,
                bulk_offdiag: gamma.sqrt(),
            },
            LimitLaw::KestenMcKay { kappa_a, kappa_b } => {
                let t = 2.0 + kappa_a + kappa_b;
                let one_a = 1.0 + kappa_a;
                let one_b = 1.0 + kappa_b;
                let one_ab = 1.0 + kappa_a + kappa_b;
                LimitEntries {
                    first_diag: one_a / t,
                    first_offdiag: (one_a * one_b).sqrt() / t.powf(1.5),
                    bulk_diag: (one_b + one_a * one_ab) / (t * t),
                    bulk_offdiag: (one_a * one_b * one_ab).sqrt() / (t * t),
                }
            }
        }
    }
}

/// Recovers a density value from an m-function by Stieltjes inversion:
/// polynomial (Neville) extrapolation of `Im m(x + i eps) / pi` to
/// `eps -> 0` along the supplied schedule.
///
/// Against a discrete (atomic) m-function the schedule must stay above
/// roughly five mean atom spacings; the schedule is a parameter precisely so
/// callers can honor that.
pub fn stieltjes_inversion(
    m_eval: impl Fn(Complex64) -> Complex64,
    x: f64,
    eps_schedule: &[f64],
) -> Result<f64> {
    if eps_schedule.is_empty() {
        return Err(Error::parameter("inversion schedule must be nonempty"));
    }
    if eps_schedule.iter().any(|&e| !(e.is_finite() && e > 0.0)) {
        return Err(Error::parameter(
            "inversion schedule entries must be positive and finite",
        ));
    }
    if eps_schedule.windows(2).any(|p| p[0] <= p[1]) {
        return Err(Error::parameter(
            "inversion schedule must be strictly decreasing",
        ));
    }

    let k = eps_schedule.len();
    let mut table: Vec<f64> = eps_schedule
        .iter()
        .map(|&eps| m_eval(Complex64::new(x, eps)).im / std::f64::consts::PI)
        .collect();
    // Neville tableau evaluated at eps = 0
    for level in 1..k {
        for j in 0..k - level {
            let e_lo = eps_schedule[j];
            let e_hi = eps_schedule[j + level];
            table[j] = (e_lo * table[j + 1] - e_hi * table[j]) / (e_lo - e_hi);
        }
    }
    Ok(table[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{free_truncation, moment_oracle};

    const PI: f64 = std::f64::consts::PI;

    fn laws_under_test() -> Vec<LimitLaw> {
        vec![
            LimitLaw::Semicircle,
            LimitLaw::marchenko_pastur(0.25).unwrap(),
            LimitLaw::marchenko_pastur(0.5).unwrap(),
            LimitLaw::marchenko_pastur(0.9).unwrap(),
            LimitLaw::kesten_mckay(0.0, 0.0).unwrap(),
            LimitLaw::kesten_mckay(1.0, 0.5).unwrap(),
            LimitLaw::kesten_mckay(3.0, 3.0).unwrap(),
        ]
    }

    #[test]
    fn semicircle_density_values() {
        let sc = LimitLaw::Semicircle;
        assert!((sc.density(0.0) - 1.0 / PI).abs() < 1e-15);
        assert_eq!(sc.density(2.0), 0.0);
        assert_eq!(sc.density(-2.0), 0.0);
        assert_eq!(sc.density(3.0), 0.0);
    }

    #[test]
    fn marchenko_pastur_density_value() {
        // gamma = 1/4 at x = 1: (2/pi) sqrt(0.9375)
        let mp = LimitLaw::marchenko_pastur(0.25).unwrap();
        let expected = 2.0 / PI * 0.9375_f64.sqrt();
        assert!((mp.density(1.0) - expected).abs() < 1e-12);
    }

    #[test]
    fn edges_match_closed_forms() {
        let mp = LimitLaw::marchenko_pastur(0.25).unwrap();
        assert_eq!(mp.edges(), (0.25, 2.25));
        let arcsine = LimitLaw::kesten_mckay(0.0, 0.0).unwrap();
        assert_eq!(arcsine.edges(), (0.0, 1.0));
        assert_eq!(LimitLaw::Semicircle.edges(), (-2.0, 2.0));
        let (lo, hi) = LimitLaw::kesten_mckay(3.0, 3.0).unwrap().edges();
        assert!(0.0 < lo && lo < hi && hi < 1.0);
    }

    #[test]
    fn constructor_domains() {
        assert!(LimitLaw::marchenko_pastur(1.5).is_err());
        assert!(LimitLaw::marchenko_pastur(1.0).is_err());
        assert!(LimitLaw::marchenko_pastur(0.0).is_err());
        assert!(LimitLaw::kesten_mckay(-0.1, 0.0).is_err());
    }

    #[test]
    fn densities_are_normalized() {
        for law in laws_under_test() {
            let mass = law.integrate(|_| 1.0);
            assert!((mass - 1.0).abs() < 1e-10, "{law:?}: mass {mass}");
        }
    }

    #[test]
    fn arcsine_special_case_pointwise() {
        let law = LimitLaw::kesten_mckay(0.0, 0.0).unwrap();
        for i in 1..=1000 {
            let x = i as f64 / 1001.0;
            let arcsine = 1.0 / (PI * (x * (1.0 - x)).sqrt());
            assert!((law.density(x) - arcsine).abs() <= 1e-12 * arcsine, "x={x}");
        }
    }

    #[test]
    fn semicircle_stieltjes_closed_form_value() {
        // m(2i) = i (sqrt 2 - 1)
        let m = LimitLaw::Semicircle
            .stieltjes(Complex64::new(0.0, 2.0))
            .unwrap();
        let target = Complex64::new(0.0, std::f64::consts::SQRT_2 - 1.0);
        assert!((m - target).norm() < 1e-14, "m = {m}");
    }

    #[test]
    fn stieltjes_matches_quadrature() {
        let z = Complex64::new(0.5, 1.0);
        for law in laws_under_test() {
            let closed = law.stieltjes(z).unwrap();
            let quad = law.stieltjes_by_quadrature(z);
            assert!(
                (closed - quad).norm() < 1e-8,
                "{law:?}: closed {closed}, quadrature {quad}"
            );
        }
    }

    #[test]
    fn stieltjes_is_herglotz() {
        let mut s = crate::distributions::RngStream::new(7);
        for law in laws_under_test() {
            for _ in 0..100 {
                let z = Complex64::new(8.0 * s.next_f64() - 4.0, 2.0 * s.next_f64() + 1e-3);
                let m = law.stieltjes(z).unwrap();
                assert!(m.im > 0.0, "{law:?} at {z}: m = {m}");
            }
        }
    }

    #[test]
    fn stieltjes_rejects_lower_half_plane() {
        assert!(LimitLaw::Semicircle
            .stieltjes(Complex64::new(0.0, -1.0))
            .is_err());
        assert!(LimitLaw::Semicircle
            .stieltjes(Complex64::new(0.5, 0.0))
            .is_err());
    }

    #[test]
    fn semicircle_moments_are_catalan() {
        let sc = LimitLaw::Semicircle;
        // independent walk-counting oracle on a large free truncation
        for (k, catalan) in [(2u32, 1.0), (4, 2.0), (6, 5.0), (8, 14.0), (10, 42.0)] {
            let oracle = moment_oracle(&free_truncation(k as usize / 2 + 1), k);
            assert_eq!(oracle, catalan);
            assert!(
                (sc.moment(k) - catalan).abs() < 1e-10,
                "k={k}: {} vs {catalan}",
                sc.moment(k)
            );
        }
        for k in [1u32, 3, 5, 7] {
            assert!(sc.moment(k).abs() < 1e-12, "odd moment k={k}");
        }
    }

    #[test]
    fn first_moments_match_limit_matrix_corner() {
        for law in laws_under_test() {
            let entries = law.limit_entries();
            assert!(
                (law.moment(1) - entries.first_diag).abs() < 1e-10,
                "{law:?}"
            );
        }
        // arcsine symmetry forces 1/2
        let arcsine = LimitLaw::kesten_mckay(0.0, 0.0).unwrap();
        assert!((arcsine.moment(1) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn quadrature_moments_match_walk_oracle() {
        for law in laws_under_test() {
            for k in 0..=20u32 {
                let n = (k as usize / 2 + 1).max(2);
                let j = crate::ensembles::limit_matrix(law, n);
                let oracle = moment_oracle(&j, k);
                let quad = law.moment(k);
                assert!(
                    (quad - oracle).abs() <= 1e-8 * oracle.abs().max(1.0),
                    "{law:?} k={k}: quad {quad} oracle {oracle}"
                );
            }
        }
    }

    #[test]
    fn kesten_mckay_normalization_identity() {
        let mut s = crate::distributions::RngStream::new(99);
        for _ in 0..100 {
            let ka = 5.0 * s.next_f64();
            let kb = 5.0 * s.next_f64();
            let law = LimitLaw::kesten_mckay(ka, kb).unwrap();
            let (lo, hi) = law.edges();
            let lhs = 0.5 * (1.0 - (lo * hi).sqrt() - ((1.0 - lo) * (1.0 - hi)).sqrt());
            let rhs = 1.0 / (2.0 + ka + kb);
            assert!((lhs - rhs).abs() < 1e-12, "ka={ka} kb={kb}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn variance_functional_known_values() {
        let sc = LimitLaw::Semicircle;
        assert!((sc.variance_functional(&Polynomial::monomial(1)) - 1.0).abs() < 1e-10);
        assert!((sc.variance_functional(&Polynomial::monomial(2)) - 1.0).abs() < 1e-10);
        for law in laws_under_test() {
            assert_eq!(law.variance_functional(&Polynomial::constant(3.5)), 0.0);
        }
        // arcsine: Var(x) = 3/8 - 1/4 = 1/8
        let arcsine = LimitLaw::kesten_mckay(0.0, 0.0).unwrap();
        assert!((arcsine.variance_functional(&Polynomial::monomial(1)) - 0.125).abs() < 1e-10);
        // MP: Var(x) = gamma
        let mp = LimitLaw::marchenko_pastur(0.5).unwrap();
        assert!((mp.variance_functional(&Polynomial::monomial(1)) - 0.5).abs() < 1e-10);
    }

    #[test]
    fn variance_functional_shift_invariance() {
        let f = Polynomial::new(vec![0.3, -1.0, 0.5, 2.0]);
        for law in laws_under_test() {
            let base = law.variance_functional(&f);
            let shifted = law.variance_functional(&f.add_constant(17.0));
            assert!(
                (base - shifted).abs() < 1e-10,
                "{law:?}: {base} vs {shifted}"
            );
        }
    }

    #[test]
    fn inversion_recovers_semicircle_density() {
        let sc = LimitLaw::Semicircle;
        let schedule = [1e-2, 1e-3, 1e-4];
        let est = stieltjes_inversion(|z| sc.stieltjes(z).unwrap(), 0.0, &schedule).unwrap();
        assert!((est - 1.0 / PI).abs() < 1e-3, "estimate {est}");
    }

    #[test]
    fn inversion_vanishes_off_support() {
        let sc = LimitLaw::Semicircle;
        let schedule = [1e-2, 1e-3, 1e-4];
        let est = stieltjes_inversion(|z| sc.stieltjes(z).unwrap(), 3.0, &schedule).unwrap();
        assert!(est.abs() < 1e-6, "estimate {est}");
    }

    #[test]
    fn inversion_validates_schedule() {
        let m = |z: Complex64| LimitLaw::Semicircle.stieltjes(z).unwrap();
        assert!(stieltjes_inversion(m, 0.0, &[]).is_err());
        assert!(stieltjes_inversion(m, 0.0, &[1e-3, 1e-2]).is_err());
        assert!(stieltjes_inversion(m, 0.0, &[1e-2, 1e-2]).is_err());
        assert!(stieltjes_inversion(m, 0.0, &[1e-2, -1e-3]).is_err());
    }
}
