//! The three random tridiagonal matrix models (Hermite, Laguerre, MANOVA)
//! and their non-random limit matrices.
//!
//! Scaling conventions are baked into the samplers (division by `sqrt(n
//! beta)`, `m beta`): the limit theorems hold for the scaled models only, so
//! exposing unscaled entries would just invite mistakes. Draw order is fixed
//! (diagonal before off-diagonal, ascending index; for Laguerre the `c` chi
//! draws before the `d` draws, for MANOVA `p_1..p_{2n-1}` in order) so a seed
//! pins the whole matrix.

use serde::{Deserialize, Serialize};

use crate::distributions::{
    sample_beta, sample_chi, sample_dirichlet_sym, sample_normal, RngStream,
};
use crate::error::{Error, Result};
use crate::jacobi::JacobiMatrix;
use crate::limit_laws::LimitLaw;

/// Gaussian (Hermite) beta ensemble: `n` points, inverse temperature `beta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermiteConfig {
    n: usize,
    beta: f64,
}

impl HermiteConfig {
    pub fn new(n: usize, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::parameter("hermite: n must be >= 1"));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::parameter(format!(
                "hermite: beta must be finite and positive, got {beta}"
            )));
        }
        Ok(HermiteConfig { n, beta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Wishart (Laguerre) beta ensemble with real `m > n - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaguerreConfig {
    n: usize,
    m: f64,
    beta: f64,
}

impl LaguerreConfig {
    pub fn new(n: usize, m: f64, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::parameter("laguerre: n must be >= 1"));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::parameter(format!(
                "laguerre: beta must be finite and positive, got {beta}"
            )));
        }
        if !(m.is_finite() && m > n as f64 - 1.0) {
            return Err(Error::parameter(format!(
                "laguerre: m must exceed n - 1, got m = {m} with n = {n}"
            )));
        }
        Ok(LaguerreConfig { n, m, beta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Realized aspect ratio `gamma_n = n / m`.
    pub fn gamma(&self) -> f64 {
        self.n as f64 / self.m
    }
}

/// MANOVA (Jacobi) beta ensemble with exponents `a, b > -1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManovaConfig {
    n: usize,
    beta: f64,
    a: f64,
    b: f64,
}

impl ManovaConfig {
    pub fn new(n: usize, beta: f64, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::parameter("manova: n must be >= 1"));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::parameter(format!(
                "manova: beta must be finite and positive, got {beta}"
            )));
        }
        if !(a.is_finite() && a > -1.0) || !(b.is_finite() && b > -1.0) {
            return Err(Error::parameter(format!(
                "manova: a and b must exceed -1, got a = {a}, b = {b}"
            )));
        }
        Ok(ManovaConfig { n, beta, a, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Realized `kappa_a = a / (n beta / 2)`.
    pub fn kappa_a(&self) -> f64 {
        2.0 * self.a / (self.n as f64 * self.beta)
    }

    pub fn kappa_b(&self) -> f64 {
        2.0 * self.b / (self.n as f64 * self.beta)
    }
}

/// Any of the three ensembles, for experiment plumbing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "ensemble", rename_all = "snake_case")]
pub enum EnsembleConfig {
    Hermite(HermiteConfig),
    Laguerre(LaguerreConfig),
    Manova(ManovaConfig),
}

impl EnsembleConfig {
    pub fn n(&self) -> usize {
        match self {
            EnsembleConfig::Hermite(c) => c.n(),
            EnsembleConfig::Laguerre(c) => c.n(),
            EnsembleConfig::Manova(c) => c.n(),
        }
    }

    pub fn beta(&self) -> f64 {
        match self {
            EnsembleConfig::Hermite(c) => c.beta(),
            EnsembleConfig::Laguerre(c) => c.beta(),
            EnsembleConfig::Manova(c) => c.beta(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            EnsembleConfig::Hermite(_) => "hermite",
            EnsembleConfig::Laguerre(_) => "laguerre",
            EnsembleConfig::Manova(_) => "manova",
        }
    }

    pub fn sample(&self, stream: &mut RngStream) -> Result<JacobiMatrix> {
        match self {
            EnsembleConfig::Hermite(c) => sample_hermite(c, stream),
            EnsembleConfig::Laguerre(c) => sample_laguerre(c, stream),
            EnsembleConfig::Manova(c) => sample_manova(c, stream),
        }
    }

    /// The limit law at the realized finite-n parameters: Marchenko-Pastur
    /// uses `gamma_n = n/m`, Kesten-McKay uses `kappa = 2a/(n beta)`.
    pub fn limit_law(&self) -> Result<LimitLaw> {
        match self {
            EnsembleConfig::Hermite(_) => Ok(LimitLaw::Semicircle),
            EnsembleConfig::Laguerre(c) => LimitLaw::marchenko_pastur(c.gamma()),
            EnsembleConfig::Manova(c) => LimitLaw::kesten_mckay(c.kappa_a(), c.kappa_b()),
        }
    }
}

/// One draw of the Hermite model: diagonal `N(0,2)/sqrt(n beta)`, i-th
/// off-diagonal `chi_{(n-i) beta}/sqrt(n beta)`, all entries independent.
pub fn sample_hermite(cfg: &HermiteConfig, stream: &mut RngStream) -> Result<JacobiMatrix> {
    let n = cfg.n();
    let beta = cfg.beta();
    let scale = (n as f64 * beta).sqrt();
    let mut diag = Vec::with_capacity(n);
    for _ in 0..n {
        diag.push(sample_normal(stream, 0.0, 2.0)? / scale);
    }
    let mut offdiag = Vec::with_capacity(n - 1);
    for i in 1..n {
        let dof = (n - i) as f64 * beta;
        offdiag.push(sample_chi(stream, dof)? / scale);
    }
    JacobiMatrix::new(diag, offdiag)
}

/// One draw of the Laguerre model, assembled directly in tridiagonal form
/// from `c_i ~ chi_{beta(m-i+1)}` and `d_i ~ chi_{beta(n-i)}`; the dense
/// `B B^t` product is never materialized.
pub fn sample_laguerre(cfg: &LaguerreConfig, stream: &mut RngStream) -> Result<JacobiMatrix> {
    let n = cfg.n();
    let (m, beta) = (cfg.m(), cfg.beta());
    let scale = m * beta;
    let c: Vec<f64> = (1..=n)
        .map(|i| sample_chi(stream, beta * (m - i as f64 + 1.0)))
        .collect::<Result<_>>()?;
    let d: Vec<f64> = (1..n)
        .map(|i| sample_chi(stream, beta * (n - i) as f64))
        .collect::<Result<_>>()?;

    let mut diag = Vec::with_capacity(n);
    diag.push(c[0] * c[0] / scale);
    for i in 1..n {
        diag.push((c[i] * c[i] + d[i - 1] * d[i - 1]) / scale);
    }
    let offdiag: Vec<f64> = (0..n - 1).map(|i| c[i] * d[i] / scale).collect();
    JacobiMatrix::new(diag, offdiag)
}

// finite-n Beta parameters of p_k in the MANOVA model (k is 1-based)
fn manova_beta_parameters(cfg: &ManovaConfig, k: usize) -> (f64, f64) {
    let n = cfg.n() as f64;
    let beta = cfg.beta();
    let (a, b) = (cfg.a(), cfg.b());
    let kf = k as f64;
    if k.is_multiple_of(2) {
        (
            (2.0 * n - kf) / 4.0 * beta,
            (2.0 * n - kf - 2.0) / 4.0 * beta + a + b + 2.0,
        )
    } else {
        (
            (2.0 * n - kf - 1.0) / 4.0 * beta + a + 1.0,
            (2.0 * n - kf - 1.0) / 4.0 * beta + b + 1.0,
        )
    }
}

/// One draw of the MANOVA model: independent `p_1..p_{2n-1}` from the
/// parity-dependent Beta laws, assembled with `p_{-1} = p_0 = 0` into
/// `a_k = p_{2k-2}(1-p_{2k-3}) + p_{2k-1}(1-p_{2k-2})` and
/// `b_k = sqrt(p_{2k-1}(1-p_{2k-2}) p_{2k}(1-p_{2k-1}))`.
pub fn sample_manova(cfg: &ManovaConfig, stream: &mut RngStream) -> Result<JacobiMatrix> {
    let n = cfg.n();
    let mut p_store = Vec::with_capacity(2 * n - 1);
    for k in 1..=(2 * n - 1) {
        let (x, y) = manova_beta_parameters(cfg, k);
        p_store.push(sample_beta(stream, x, y)?);
    }
    let p = |k: isize| -> f64 {
        if k <= 0 {
            0.0
        } else {
            p_store[k as usize - 1]
        }
    };

    let mut diag = Vec::with_capacity(n);
    for k in 1..=n as isize {
        diag.push(p(2 * k - 2) * (1.0 - p(2 * k - 3)) + p(2 * k - 1) * (1.0 - p(2 * k - 2)));
    }
    let mut offdiag = Vec::with_capacity(n - 1);
    for k in 1..n as isize {
        offdiag
            .push((p(2 * k - 1) * (1.0 - p(2 * k - 2)) * p(2 * k) * (1.0 - p(2 * k - 1))).sqrt());
    }
    JacobiMatrix::new(diag, offdiag)
}

/// Dirichlet weight vector of the spectral measure: `sample_dirichlet_sym`
/// with concentration `beta / 2`.
pub fn sample_weights(n: usize, beta: f64, stream: &mut RngStream) -> Result<Vec<f64>> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::parameter(format!(
            "weights: beta must be finite and positive, got {beta}"
        )));
    }
    sample_dirichlet_sym(stream, n, beta / 2.0)
}

/// Closed-form Dirichlet weight moments for `n` weights at inverse
/// temperature `beta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightMoments {
    /// `E[w_i] = 1/n`
    pub mean: f64,
    /// `E[w_i^2] = (beta + 2) / (n (n beta + 2))`
    pub second: f64,
    /// `E[w_i w_j] = beta / (n (n beta + 2))`, `i != j`
    pub cross: f64,
}

pub fn weight_moments(n: usize, beta: f64) -> WeightMoments {
    let nf = n as f64;
    WeightMoments {
        mean: 1.0 / nf,
        second: (beta + 2.0) / (nf * (nf * beta + 2.0)),
        cross: beta / (nf * (nf * beta + 2.0)),
    }
}

/// Size-`size` truncation of the non-random limit Jacobi matrix of `law`.
pub fn limit_matrix(law: LimitLaw, size: usize) -> JacobiMatrix {
    assert!(size >= 1, "limit matrix size must be >= 1");
    let entries = law.limit_entries();
    let mut diag = vec![entries.bulk_diag; size];
    diag[0] = entries.first_diag;
    let mut offdiag = vec![entries.bulk_offdiag; size.saturating_sub(1)];
    if let Some(first) = offdiag.first_mut() {
        *first = entries.first_offdiag;
    }
    JacobiMatrix::new(diag, offdiag).expect("limit matrix entries are valid")
}

/// A matrix entry named the way the models index them: `Diag(i)` is `a_{i+1}`,
/// `Offdiag(i)` is `b_{i+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "entry", content = "index", rename_all = "snake_case")]
pub enum EntryIndex {
    Diag(usize),
    Offdiag(usize),
}

impl EntryIndex {
    pub fn extract(&self, j: &JacobiMatrix) -> Result<f64> {
        match *self {
            EntryIndex::Diag(i) => j.diag().get(i).copied().ok_or_else(|| {
                Error::Index(format!(
                    "diagonal index {i} out of range for size {}",
                    j.size()
                ))
            }),
            EntryIndex::Offdiag(i) => j.offdiag().get(i).copied().ok_or_else(|| {
                Error::Index(format!(
                    "off-diagonal index {i} out of range for size {}",
                    j.size()
                ))
            }),
        }
    }

    fn check_bounds(&self, n: usize) -> Result<()> {
        let ok = match *self {
            EntryIndex::Diag(i) => i < n,
            EntryIndex::Offdiag(i) => i + 1 < n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Index(format!(
                "entry {self:?} out of range for matrix size {n}"
            )))
        }
    }
}

/// Limit value of a single matrix entry at the realized finite-n parameters.
pub fn limit_entry(cfg: &EnsembleConfig, entry: EntryIndex) -> Result<f64> {
    entry.check_bounds(cfg.n())?;
    let entries = cfg.limit_law()?.limit_entries();
    Ok(match entry {
        EntryIndex::Diag(0) => entries.first_diag,
        EntryIndex::Diag(_) => entries.bulk_diag,
        EntryIndex::Offdiag(0) => entries.first_offdiag,
        EntryIndex::Offdiag(_) => entries.bulk_offdiag,
    })
}

/// Variance of the scaled entry fluctuation `sqrt(n beta) (entry - limit)`.
///
/// Hermite values come straight off the fluctuation matrix (`N(0,2)` on the
/// diagonal, `N(0,1/2)` off it). Laguerre and MANOVA values are the
/// delta-method images of the chi / Beta central limit theorems through the
/// entry formulas, evaluated at the limit entries.
pub fn entry_fluctuation_variance(cfg: &EnsembleConfig, entry: EntryIndex) -> Result<f64> {
    entry.check_bounds(cfg.n())?;
    match cfg {
        EnsembleConfig::Hermite(_) => Ok(match entry {
            EntryIndex::Diag(_) => 2.0,
            EntryIndex::Offdiag(_) => 0.5,
        }),
        EnsembleConfig::Laguerre(c) => {
            let g = c.gamma();
            Ok(match entry {
                // a_1 = c_1^2/(m beta) ~ 1 + 2 sqrt(g) eta / sqrt(n beta)
                EntryIndex::Diag(0) => 2.0 * g,
                // a_i = (c_i^2 + d_{i-1}^2)/(m beta): two independent N(0,1/2) terms
                EntryIndex::Diag(_) => 4.0 * g,
                // b_i = c_i d_i/(m beta) ~ sqrt(g) + sqrt(g)(sqrt(g) eta + zeta)/sqrt(n beta)
                EntryIndex::Offdiag(_) => g * (g + 1.0) / 2.0,
            })
        }
        EnsembleConfig::Manova(c) => {
            let (ka, kb) = (c.kappa_a(), c.kappa_b());
            let t = 2.0 + ka + kb;
            let odd = (1.0 + ka) / t;
            let even = 1.0 / t;
            let var_odd = 2.0 * (1.0 + ka) * (1.0 + kb) / t.powi(3);
            let var_even = 2.0 * (1.0 + ka + kb) / t.powi(3);
            Ok(match entry {
                // a_1 = p_1
                EntryIndex::Diag(0) => var_odd,
                // a_k = p_{2k-2}(1-p_{2k-3}) + p_{2k-1}(1-p_{2k-2})
                EntryIndex::Diag(_) => {
                    even * even * var_odd
                        + (1.0 - 2.0 * odd).powi(2) * var_even
                        + (1.0 - even).powi(2) * var_odd
                }
                // b_k^2 = p_{2k-1}(1-p_{2k-2}) p_{2k}(1-p_{2k-1}); sqrt via
                // Var(sqrt(g)) = Var(g)/(4 g_infinity)
                EntryIndex::Offdiag(i) => {
                    let (var_g, g_inf) = if i == 0 {
                        // p_0 = 0: g = p_1 p_2 (1 - p_1)
                        let var_g = (even * (1.0 - 2.0 * odd)).powi(2) * var_odd
                            + (odd * (1.0 - odd)).powi(2) * var_even;
                        (var_g, odd * even * (1.0 - odd))
                    } else {
                        let var_g = (odd * even * (1.0 - odd)).powi(2) * var_even
                            + ((1.0 - even) * even * (1.0 - 2.0 * odd)).powi(2) * var_odd
                            + (odd * (1.0 - even) * (1.0 - odd)).powi(2) * var_even;
                        (var_g, odd * (1.0 - even) * even * (1.0 - odd))
                    };
                    var_g / (4.0 * g_inf)
                }
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::empirical_measure;

    // Lanczos g=7 approximation, plenty for test targets
    #[allow(clippy::excessive_precision)]
    fn ln_gamma(x: f64) -> f64 {
        const COEFFS: [f64; 8] = [
            676.5203681218851,
            -1259.1392167224028,
            771.32342877765313,
            -176.61502916214059,
            12.507343278686905,
            -0.13857109526572012,
            9.9843695780195716e-6,
            1.5056327351493116e-7,
        ];
        if x < 0.5 {
            let pi = std::f64::consts::PI;
            return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
        }
        let x = x - 1.0;
        let mut acc = 0.99999999999980993;
        for (i, &c) in COEFFS.iter().enumerate() {
            acc += c / (x + i as f64 + 1.0);
        }
        let t = x + 7.5;
        0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
    }

    fn chi_mean(dof: f64) -> f64 {
        std::f64::consts::SQRT_2 * (ln_gamma((dof + 1.0) / 2.0) - ln_gamma(dof / 2.0)).exp()
    }

    fn stream() -> RngStream {
        RngStream::new(0xBE7A)
    }

    #[test]
    fn config_validation() {
        assert!(HermiteConfig::new(0, 2.0).is_err());
        assert!(HermiteConfig::new(5, 0.0).is_err());
        assert!(LaguerreConfig::new(10, 9.0, 1.0).is_err());
        assert!(LaguerreConfig::new(10, 9.5, 1.0).is_ok());
        assert!(ManovaConfig::new(5, 2.0, -1.0, 0.0).is_err());
        assert!(ManovaConfig::new(5, 2.0, -0.5, 3.0).is_ok());
    }

    #[test]
    fn hermite_scalar_case() {
        // n = 1: the matrix is the single draw N(0,2)/sqrt(beta)
        let cfg = HermiteConfig::new(1, 4.0).unwrap();
        let mut s = stream();
        let trials = 100_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..trials {
            let j = sample_hermite(&cfg, &mut s).unwrap();
            assert_eq!(j.size(), 1);
            sum += j.diag()[0];
            sumsq += j.diag()[0] * j.diag()[0];
        }
        let mean = sum / trials as f64;
        let var = sumsq / trials as f64 - mean * mean;
        assert!(mean.abs() < 0.01);
        assert!((var - 0.5).abs() < 0.02, "variance {var}");
    }

    #[test]
    fn hermite_first_offdiag_mean() {
        // E[b_1] = E[chi_{(n-1) beta}] / sqrt(n beta), evaluated via ln_gamma
        let cfg = HermiteConfig::new(1000, 2.0).unwrap();
        let expected = chi_mean(999.0 * 2.0) / 2000.0_f64.sqrt();
        assert!((expected - 0.9995).abs() < 1e-3);
        let mut s = stream();
        let trials = 10_000;
        let mut acc = 0.0;
        for _ in 0..trials {
            let j = sample_hermite(&cfg, &mut s).unwrap();
            acc += j.offdiag()[0];
        }
        let mean = acc / trials as f64;
        assert!((mean - expected).abs() < 0.005, "mean {mean} vs {expected}");
    }

    #[test]
    fn hermite_entrywise_limit_single_draw() {
        let cfg = HermiteConfig::new(1_000_000, 1.0).unwrap();
        let mut s = stream();
        let j = sample_hermite(&cfg, &mut s).unwrap();
        assert!(
            (j.offdiag()[0] - 1.0).abs() < 0.01,
            "b_1 = {}",
            j.offdiag()[0]
        );
    }

    #[test]
    fn laguerre_scalar_case() {
        // n = 1: chi^2_{beta m} / (m beta), expectation 1
        let cfg = LaguerreConfig::new(1, 8.0, 2.0).unwrap();
        let mut s = stream();
        let trials = 100_000;
        let mut acc = 0.0;
        for _ in 0..trials {
            let j = sample_laguerre(&cfg, &mut s).unwrap();
            assert_eq!(j.size(), 1);
            acc += j.diag()[0];
        }
        let mean = acc / trials as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn laguerre_bulk_diagonal_near_limit() {
        // gamma = 1/2: a_2 concentrates at 1 + gamma = 1.5
        let cfg = LaguerreConfig::new(1000, 2000.0, 2.0).unwrap();
        let mut s = stream();
        let j = sample_laguerre(&cfg, &mut s).unwrap();
        assert!((j.diag()[1] - 1.5).abs() < 0.1, "a_2 = {}", j.diag()[1]);
        assert!(j.offdiag().iter().all(|&b| b > 0.0));
    }

    #[test]
    fn manova_scalar_case() {
        // n = 1: a_1 = p_1 ~ Beta(a+1, b+1); symmetric for a = b = 0
        let cfg = ManovaConfig::new(1, 2.0, 0.0, 0.0).unwrap();
        let mut s = stream();
        let trials = 100_000;
        let mut acc = 0.0;
        for _ in 0..trials {
            let j = sample_manova(&cfg, &mut s).unwrap();
            assert_eq!(j.size(), 1);
            acc += j.diag()[0];
        }
        let mean = acc / trials as f64;
        assert!((mean - 0.5).abs() < 0.005, "mean {mean}");
    }

    #[test]
    fn manova_spectrum_lies_in_unit_interval() {
        let cfg = ManovaConfig::new(60, 2.0, 1.5, 0.5).unwrap();
        let mut s = stream();
        for _ in 0..20 {
            let j = sample_manova(&cfg, &mut s).unwrap();
            let spectrum = empirical_measure(&j).unwrap();
            assert!(spectrum.points().iter().all(|&l| (0.0..=1.0).contains(&l)));
        }
    }

    #[test]
    fn manova_bulk_diagonal_near_limit() {
        // kappa_a = kappa_b = 0: A = 1/2
        let cfg = ManovaConfig::new(500, 2.0, 0.0, 0.0).unwrap();
        let mut s = stream();
        let j = sample_manova(&cfg, &mut s).unwrap();
        assert!((j.diag()[1] - 0.5).abs() < 0.1, "a_2 = {}", j.diag()[1]);
    }

    #[test]
    fn laguerre_spectrum_nonnegative() {
        let cfg = LaguerreConfig::new(80, 200.0, 1.0).unwrap();
        let mut s = stream();
        for _ in 0..10 {
            let j = sample_laguerre(&cfg, &mut s).unwrap();
            let spectrum = empirical_measure(&j).unwrap();
            assert!(spectrum.points().iter().all(|&l| l > -1e-12));
        }
    }

    #[test]
    fn weights_first_moment() {
        let mut s = stream();
        let trials = 1_000_000;
        let mut acc = [0.0; 3];
        for _ in 0..trials {
            let w = sample_weights(3, 2.0, &mut s).unwrap();
            for (a, &x) in acc.iter_mut().zip(&w) {
                *a += x;
            }
        }
        for (i, &a) in acc.iter().enumerate() {
            let mean = a / trials as f64;
            assert!((mean - 1.0 / 3.0).abs() < 0.002, "E[w_{i}] = {mean}");
        }
    }

    #[test]
    fn weights_scalar_and_second_moment() {
        let mut s = stream();
        assert_eq!(sample_weights(1, 3.0, &mut s).unwrap(), vec![1.0]);
        // n=2, beta=4: E[w^2] = 6/20
        let trials = 1_000_000;
        let mut acc = 0.0;
        for _ in 0..trials {
            let w = sample_weights(2, 4.0, &mut s).unwrap();
            acc += w[0] * w[0];
        }
        let m2 = acc / trials as f64;
        assert!((m2 - 0.3).abs() < 0.002, "E[w^2] = {m2}");
        let wm = weight_moments(2, 4.0);
        assert_eq!(wm.second, 0.3);
        assert_eq!(wm.mean, 0.5);
    }

    #[test]
    fn limit_matrix_values() {
        let sc = limit_matrix(LimitLaw::Semicircle, 3);
        assert_eq!(sc.diag(), &[0.0, 0.0, 0.0]);
        assert_eq!(sc.offdiag(), &[1.0, 1.0]);

        let mp = limit_matrix(LimitLaw::marchenko_pastur(0.25).unwrap(), 2);
        assert_eq!(mp.diag(), &[1.0, 1.25]);
        assert_eq!(mp.offdiag(), &[0.5]);

        let km = limit_matrix(LimitLaw::kesten_mckay(0.0, 0.0).unwrap(), 2);
        assert!((km.diag()[0] - 0.5).abs() < 1e-15);
        assert!((km.diag()[1] - 0.5).abs() < 1e-15);
        assert!((km.offdiag()[0] - 2.0_f64.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn entry_helpers_respect_bounds() {
        let cfg = EnsembleConfig::Hermite(HermiteConfig::new(4, 2.0).unwrap());
        assert!(limit_entry(&cfg, EntryIndex::Diag(3)).is_ok());
        assert!(limit_entry(&cfg, EntryIndex::Diag(4)).is_err());
        assert!(limit_entry(&cfg, EntryIndex::Offdiag(3)).is_err());
        assert_eq!(
            entry_fluctuation_variance(&cfg, EntryIndex::Diag(0)).unwrap(),
            2.0
        );
        assert_eq!(
            entry_fluctuation_variance(&cfg, EntryIndex::Offdiag(1)).unwrap(),
            0.5
        );
    }

    #[test]
    fn laguerre_fluctuation_targets() {
        // gamma = 1/2: offdiag target gamma (gamma + 1)/2 = 0.375
        let cfg = EnsembleConfig::Laguerre(LaguerreConfig::new(400, 800.0, 1.0).unwrap());
        let v = entry_fluctuation_variance(&cfg, EntryIndex::Offdiag(0)).unwrap();
        assert!((v - 0.375).abs() < 1e-12);
        assert!(
            (entry_fluctuation_variance(&cfg, EntryIndex::Diag(0)).unwrap() - 1.0).abs() < 1e-12
        );
        assert!(
            (entry_fluctuation_variance(&cfg, EntryIndex::Diag(2)).unwrap() - 2.0).abs() < 1e-12
        );
    }

    #[test]
    fn manova_fluctuation_targets_match_monte_carlo() {
        // delta-method targets vs direct simulation of the scaled entries
        let n = 4000;
        let cfg_raw = ManovaConfig::new(n, 2.0, 0.0, 0.0).unwrap();
        let cfg = EnsembleConfig::Manova(cfg_raw);
        let trials = 4000;
        let mut s = stream();
        for entry in [
            EntryIndex::Diag(0),
            EntryIndex::Diag(1),
            EntryIndex::Offdiag(0),
        ] {
            let limit = limit_entry(&cfg, entry).unwrap();
            let target = entry_fluctuation_variance(&cfg, entry).unwrap();
            let scale = (n as f64 * 2.0).sqrt();
            let mut acc = 0.0;
            let mut acc2 = 0.0;
            for _ in 0..trials {
                let j = sample_manova(&cfg_raw, &mut s).unwrap();
                let x = scale * (entry.extract(&j).unwrap() - limit);
                acc += x;
                acc2 += x * x;
            }
            let mean = acc / trials as f64;
            let var = acc2 / trials as f64 - mean * mean;
            // sd of a variance estimate ~ target sqrt(2/trials); allow 6 sd
            let tol = 6.0 * target * (2.0 / trials as f64).sqrt();
            assert!(
                (var - target).abs() < tol,
                "{entry:?}: var {var} target {target}"
            );
        }
    }

    #[test]
    fn seed_pins_the_matrix() {
        let cfg = HermiteConfig::new(50, 2.0).unwrap();
        let a = sample_hermite(&cfg, &mut RngStream::with_stream(9, 1)).unwrap();
        let b = sample_hermite(&cfg, &mut RngStream::with_stream(9, 1)).unwrap();
        assert_eq!(a, b);
    }
}
