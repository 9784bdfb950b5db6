//! Monte Carlo experiment harness: the limit theorems and variance
//! identities as falsifiable numerical checks.
//!
//! Trials are independent; trial `t` draws from `RngStream::new(seed)
//! .substream(t)` and results are reduced in trial-index order, so a report
//! is a pure function of its config no matter how many rayon workers ran it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::RngStream;
use crate::ensembles::{
    entry_fluctuation_variance, limit_entry, sample_weights, weight_moments, EnsembleConfig,
    EntryIndex,
};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::spectral::{empirical_measure, polynomial_statistic, spectral_measure};
use crate::spectral::{EmpiricalMeasure, SpectralMeasure};

/// Fraction of failed trials above which an experiment fails wholesale.
const MAX_FAILURE_FRACTION: f64 = 0.001;

// ---------------------------------------------------------------------------
// Kolmogorov distance
// ---------------------------------------------------------------------------

/// A finite atomic probability measure, exposed as `(location, weight)` atoms
/// in ascending location order.
pub trait AtomicMeasure {
    fn atom_count(&self) -> usize;
    fn atom(&self, i: usize) -> (f64, f64);
}

impl AtomicMeasure for SpectralMeasure {
    fn atom_count(&self) -> usize {
        self.len()
    }

    fn atom(&self, i: usize) -> (f64, f64) {
        self.atoms()[i]
    }
}

impl AtomicMeasure for EmpiricalMeasure {
    fn atom_count(&self) -> usize {
        self.len()
    }

    fn atom(&self, i: usize) -> (f64, f64) {
        (self.points()[i], 1.0 / self.len() as f64)
    }
}

/// `sup_x |F_mu(x) - F_nu(x)|` for two atomic measures. The sup of the
/// difference of two step functions is attained just after an atom, so an
/// exact merge walk over the atom grid suffices.
pub fn kolmogorov_distance<A, B>(mu: &A, nu: &B) -> f64
where
    A: AtomicMeasure + ?Sized,
    B: AtomicMeasure + ?Sized,
{
    let (mut i, mut j) = (0usize, 0usize);
    let (mut f_mu, mut f_nu) = (0.0f64, 0.0f64);
    let mut sup = 0.0f64;
    while i < mu.atom_count() || j < nu.atom_count() {
        let x_mu = if i < mu.atom_count() {
            mu.atom(i).0
        } else {
            f64::INFINITY
        };
        let x_nu = if j < nu.atom_count() {
            nu.atom(j).0
        } else {
            f64::INFINITY
        };
        let x = x_mu.min(x_nu);
        while i < mu.atom_count() && mu.atom(i).0 == x {
            f_mu += mu.atom(i).1;
            i += 1;
        }
        while j < nu.atom_count() && nu.atom(j).0 == x {
            f_nu += nu.atom(j).1;
            j += 1;
        }
        sup = sup.max((f_mu - f_nu).abs());
    }
    // prefix sums of the weights can round a hair past 1; the true sup of a
    // CDF difference cannot
    sup.min(1.0)
}

// ---------------------------------------------------------------------------
// Shared sample summaries
// ---------------------------------------------------------------------------

/// Moment summary of a sample: unbiased variance plus raw central-moment
/// shape diagnostics.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance (the `1 - 1/trials` centering bias of a
    /// mean-centered statistic is exactly what the `1/(count-1)` divisor
    /// corrects).
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// Standard error of the variance estimate, `sqrt((m4 - m2^2)/count)`.
    pub variance_se: f64,
}

pub(crate) fn summarize(xs: &[f64]) -> SampleSummary {
    let count = xs.len();
    let nf = count as f64;
    let mean = xs.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in xs {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    let variance = if count > 1 { m2 * nf / (nf - 1.0) } else { 0.0 };
    let (skewness, excess_kurtosis) = if m2 > 0.0 {
        (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
    } else {
        (0.0, 0.0)
    };
    let variance_se = if count > 0 {
        ((m4 - m2 * m2).max(0.0) / nf).sqrt()
    } else {
        0.0
    };
    SampleSummary {
        count,
        mean,
        variance,
        skewness,
        excess_kurtosis,
        variance_se,
    }
}

// Abramowitz-Stegun 7.1.26, |error| <= 1.5e-7; diagnostics-grade only.
fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    sign * (1.0 - poly * (-x * x).exp())
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
}

/// One-sample Kolmogorov statistic of `xs` against the normal fitted to its
/// own mean and (unbiased) standard deviation. Returns 0 for a degenerate
/// sample.
pub(crate) fn ks_vs_fitted_normal(xs: &[f64]) -> f64 {
    let summary = summarize(xs);
    if summary.variance <= 0.0 {
        return 0.0;
    }
    let sd = summary.variance.sqrt();
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let phi = normal_cdf((x - summary.mean) / sd);
        sup = sup.max((phi - i as f64 / n).abs());
        sup = sup.max(((i as f64 + 1.0) / n - phi).abs());
    }
    sup
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

// ---------------------------------------------------------------------------
// Parallel trial runner
// ---------------------------------------------------------------------------

/// Runs `trials` independent closures on derived substreams. Successes are
/// returned in trial order; failures are counted and excluded. More than
/// `MAX_FAILURE_FRACTION` failures aborts the experiment.
fn run_trials<T: Send>(
    trials: usize,
    seed: u64,
    body: impl Fn(&mut RngStream) -> Result<T> + Sync,
) -> Result<(Vec<T>, usize)> {
    let root = RngStream::new(seed);
    let outcomes: Vec<Result<T>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut stream = root.substream(t as u64);
            body(&mut stream)
        })
        .collect();
    let mut values = Vec::with_capacity(trials);
    let mut failures = 0usize;
    for outcome in outcomes {
        match outcome {
            Ok(v) => values.push(v),
            Err(_) => failures += 1,
        }
    }
    if failures as f64 > MAX_FAILURE_FRACTION * trials as f64 {
        return Err(Error::Numerical(format!(
            "{failures} of {trials} trials failed, above the {MAX_FAILURE_FRACTION} wholesale cutoff"
        )));
    }
    Ok((values, failures))
}

// ---------------------------------------------------------------------------
// CLT experiment
// ---------------------------------------------------------------------------

/// One CLT run: ensemble, polynomial test function, trial count, seed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub ensemble: EnsembleConfig,
    pub test_function: Polynomial,
    pub trials: usize,
    pub seed: u64,
}

/// Summary of a CLT run on the scaled statistic
/// `sqrt(n beta / 2) (<mu_n, f> - mean)`.
#[derive(Clone, Debug, Serialize)]
pub struct CltReport {
    pub trials: usize,
    pub failed_trials: usize,
    pub scaled_samples: Vec<f64>,
    pub sample_variance: f64,
    /// `variance_functional(limit law, f)`, never hard-coded.
    pub target_sigma2: f64,
    /// `None` below 100 trials (no normality diagnostics) or for a
    /// degenerate (constant) statistic.
    pub skewness: Option<f64>,
    pub excess_kurtosis: Option<f64>,
    pub ks_vs_normal: Option<f64>,
}

/// Draws `trials` matrices, evaluates `<mu_n, f> = f(J)(1,1)` per draw,
/// centers at the cross-trial mean (the estimate of `E[<mu_n, f>]`), scales
/// by `sqrt(n beta / 2)` and compares the unbiased sample variance to the
/// limit variance functional.
pub fn clt_experiment(cfg: &ExperimentConfig) -> Result<CltReport> {
    if cfg.trials == 0 {
        return Err(Error::parameter("clt experiment needs trials >= 1"));
    }
    let law = cfg.ensemble.limit_law()?;
    let target_sigma2 = law.variance_functional(&cfg.test_function);
    let coeffs = cfg.test_function.coeffs().to_vec();
    let ensemble = cfg.ensemble;

    let (values, failed_trials) = run_trials(cfg.trials, cfg.seed, |stream| {
        let j = ensemble.sample(stream)?;
        Ok(polynomial_statistic(&j, &coeffs))
    })?;

    let n_eff = values.len() as f64;
    // identical statistics center to themselves exactly (constant f)
    let all_equal = values.windows(2).all(|p| p[0] == p[1]);
    let center = if all_equal {
        values[0]
    } else {
        values.iter().sum::<f64>() / n_eff
    };
    let scale = (ensemble.n() as f64 * ensemble.beta() / 2.0).sqrt();
    let scaled_samples: Vec<f64> = values.iter().map(|&v| scale * (v - center)).collect();

    let summary = summarize(&scaled_samples);
    let with_diagnostics = values.len() >= 100 && summary.variance > 0.0;
    Ok(CltReport {
        trials: cfg.trials,
        failed_trials,
        sample_variance: summary.variance,
        target_sigma2,
        skewness: with_diagnostics.then_some(summary.skewness),
        excess_kurtosis: with_diagnostics.then_some(summary.excess_kurtosis),
        ks_vs_normal: with_diagnostics.then(|| ks_vs_fitted_normal(&scaled_samples)),
        scaled_samples,
    })
}

// ---------------------------------------------------------------------------
// Law of large numbers experiment
// ---------------------------------------------------------------------------

/// An ensemble family whose size can be scheduled: the growth rules for the
/// secondary parameters are explicit (`m = n / gamma`,
/// `a(n) = kappa_a n beta / 2`).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum EnsembleFamily {
    Hermite {
        beta: f64,
    },
    Laguerre {
        beta: f64,
        gamma: f64,
    },
    Manova {
        beta: f64,
        kappa_a: f64,
        kappa_b: f64,
    },
}

impl EnsembleFamily {
    pub fn at(&self, n: usize) -> Result<EnsembleConfig> {
        match *self {
            EnsembleFamily::Hermite { beta } => Ok(EnsembleConfig::Hermite(
                crate::ensembles::HermiteConfig::new(n, beta)?,
            )),
            EnsembleFamily::Laguerre { beta, gamma } => {
                if !(gamma > 0.0 && gamma < 1.0) {
                    return Err(Error::parameter(format!(
                        "laguerre family needs gamma in (0,1), got {gamma}"
                    )));
                }
                Ok(EnsembleConfig::Laguerre(
                    crate::ensembles::LaguerreConfig::new(n, n as f64 / gamma, beta)?,
                ))
            }
            EnsembleFamily::Manova {
                beta,
                kappa_a,
                kappa_b,
            } => Ok(EnsembleConfig::Manova(crate::ensembles::ManovaConfig::new(
                n,
                beta,
                kappa_a * n as f64 * beta / 2.0,
                kappa_b * n as f64 * beta / 2.0,
            )?)),
        }
    }
}

/// Per-size summary of an LLN run.
#[derive(Clone, Debug, Serialize)]
pub struct LlnPoint {
    pub n: usize,
    /// `median over trials of |<mu_n, x^k> - <mu_infinity, x^k>|`, index `k`.
    pub median_moment_errors: Vec<f64>,
    /// Median over trials of `d_K(L_n, mu_n)`.
    pub median_kolmogorov: f64,
    pub failed_trials: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LlnReport {
    pub points: Vec<LlnPoint>,
}

/// For each `n` in the (strictly increasing) schedule: per-trial spectral
/// measures, their moment deviations from the limit law up to `k_max`, and
/// the Kolmogorov distance between the empirical and spectral measures of
/// the same draw.
pub fn lln_experiment(
    family: EnsembleFamily,
    schedule: &[usize],
    k_max: u32,
    trials: usize,
    seed: u64,
) -> Result<LlnReport> {
    if schedule.is_empty() {
        return Err(Error::parameter("lln schedule must be nonempty"));
    }
    if schedule.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::parameter("lln schedule must be strictly increasing"));
    }
    if trials == 0 {
        return Err(Error::parameter("lln experiment needs trials >= 1"));
    }

    let mut points = Vec::with_capacity(schedule.len());
    for (step, &n) in schedule.iter().enumerate() {
        let cfg = family.at(n)?;
        let law = cfg.limit_law()?;
        let limit_moments: Vec<f64> = (0..=k_max).map(|k| law.moment(k)).collect();

        let step_seed = seed.wrapping_add(step as u64);
        let (rows, failed_trials) = run_trials(trials, step_seed, |stream| {
            let j = cfg.sample(stream)?;
            let mu = spectral_measure(&j)?;
            let errors: Vec<f64> = (0..=k_max)
                .map(|k| (mu.moment(k) - limit_moments[k as usize]).abs())
                .collect();
            let locations: Vec<f64> = mu.atoms().iter().map(|&(l, _)| l).collect();
            let ln = EmpiricalMeasure::new(locations)?;
            let dk = kolmogorov_distance(&ln, &mu);
            Ok((errors, dk))
        })?;

        let median_moment_errors: Vec<f64> = (0..=k_max as usize)
            .map(|k| median(rows.iter().map(|(e, _)| e[k]).collect()))
            .collect();
        let median_kolmogorov = median(rows.iter().map(|&(_, dk)| dk).collect());
        points.push(LlnPoint {
            n,
            median_moment_errors,
            median_kolmogorov,
            failed_trials,
        });
    }
    Ok(LlnReport { points })
}

// ---------------------------------------------------------------------------
// Mean identity
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct MeanIdentityReport {
    pub trials: usize,
    /// Max over draws of `|sum E[w_i] f(lambda_i) - <L_n, f>|`; the identity
    /// holds per draw, not just in expectation.
    pub max_analytic_residual: f64,
    /// Paired Monte Carlo difference `<mu_n, f> - <L_n, f>` on the same
    /// draws, with eigenvector weights.
    pub paired_mean_difference: f64,
    pub paired_se: f64,
}

/// Checks `E[<mu_n, f>] = E[<L_n, f>]` two ways on the same matrix draws:
/// the conditional expectation over weights collapses to `<L_n, f>` exactly
/// (closed-form weight mean, no weight sampling), and the paired Monte Carlo
/// difference using the actual eigenvector weights is mean-zero.
pub fn mean_identity_check(
    cfg: &EnsembleConfig,
    f: &Polynomial,
    trials: usize,
    seed: u64,
) -> Result<MeanIdentityReport> {
    if trials < 100 {
        return Err(Error::parameter("mean identity check needs trials >= 100"));
    }
    let wm = weight_moments(cfg.n(), cfg.beta());
    let cfg = *cfg;
    let f_owned = f.clone();
    let (rows, _) = run_trials(trials, seed, move |stream| {
        let j = cfg.sample(stream)?;
        let mu = spectral_measure(&j)?;
        let conditional: f64 = mu
            .atoms()
            .iter()
            .map(|&(l, _)| wm.mean * f_owned.eval(l))
            .sum();
        let ln = EmpiricalMeasure::new(mu.atoms().iter().map(|&(l, _)| l).collect())?;
        let ln_stat = ln.linear_statistic(|x| f_owned.eval(x));
        let mu_stat = mu.linear_statistic(|x| f_owned.eval(x));
        Ok(((conditional - ln_stat).abs(), mu_stat - ln_stat))
    })?;

    let max_analytic_residual = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let diffs: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let summary = summarize(&diffs);
    Ok(MeanIdentityReport {
        trials,
        max_analytic_residual,
        paired_mean_difference: summary.mean,
        paired_se: (summary.variance / diffs.len() as f64).sqrt(),
    })
}

// ---------------------------------------------------------------------------
// Variance identity
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct VarianceIdentityReport {
    pub trials: usize,
    /// `sum_{ij} f(l_i) f(l_j) (E[w_i w_j] - 1/n^2)` via the closed-form
    /// weight moments.
    pub closed_form: f64,
    /// The variance relation evaluated with the spectrum fixed:
    /// `2/(n beta + 2) Var_{L_n}[f]`.
    pub relation_rhs: f64,
    pub mc_variance: f64,
    pub mc_se: f64,
}

/// With eigenvalues fixed, the variance of `<mu_n, f>` over the Dirichlet
/// weights has a closed form in the weight moments; this computes it, an
/// independent Monte Carlo estimate over weight draws, and the variance
/// relation's right-hand side (`Var[<L_n, f>] = 0` because the spectrum is
/// fixed).
pub fn variance_identity_check(
    spectrum: &EmpiricalMeasure,
    beta: f64,
    f: &Polynomial,
    trials: usize,
    seed: u64,
) -> Result<VarianceIdentityReport> {
    if trials == 0 {
        return Err(Error::parameter(
            "variance identity check needs trials >= 1",
        ));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::parameter(format!(
            "beta must be finite and positive, got {beta}"
        )));
    }
    let n = spectrum.len();
    let nf = n as f64;
    let values: Vec<f64> = spectrum.points().iter().map(|&l| f.eval(l)).collect();
    let sum_f: f64 = values.iter().sum();
    let sum_f2: f64 = values.iter().map(|v| v * v).sum();

    let wm = weight_moments(n, beta);
    let closed_form =
        (wm.second - wm.cross) * sum_f2 + (wm.cross - 1.0 / (nf * nf)) * sum_f * sum_f;

    let mean_l = sum_f / nf;
    let var_l = sum_f2 / nf - mean_l * mean_l;
    let relation_rhs = 2.0 / (nf * beta + 2.0) * var_l;

    let (stats, _) = run_trials(trials, seed, |stream| {
        let w = sample_weights(n, beta, stream)?;
        Ok(w.iter().zip(&values).map(|(&wi, &fi)| wi * fi).sum::<f64>())
    })?;
    let summary = summarize(&stats);

    Ok(VarianceIdentityReport {
        trials,
        closed_form,
        relation_rhs,
        mc_variance: summary.variance,
        mc_se: summary.variance_se,
    })
}

// ---------------------------------------------------------------------------
// Poincare-type bound
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct PoincareReport {
    pub trials: usize,
    /// Monte Carlo `Var[<L_n, f>]`.
    pub lhs: f64,
    /// The ensemble-specific bound value.
    pub rhs: f64,
    /// `lhs / rhs`, defined as 0 when `lhs = 0`.
    pub ratio: f64,
    /// Combined Monte Carlo standard error of the ratio.
    pub ratio_se: f64,
    /// `ratio <= 1 + 5 ratio_se`.
    pub holds: bool,
}

/// Checks the variance bound `Var[<L_n, f>] <= C <bar mu_n, (f')^2>` with the
/// ensemble-specific constant: `2/(n^2 beta)` for Hermite,
/// `1/(n (a + b))` for MANOVA with positive exponents, and the
/// `lambda_max^2`-weighted form for Laguerre.
pub fn poincare_bound_check(
    cfg: &EnsembleConfig,
    f: &Polynomial,
    trials: usize,
    seed: u64,
) -> Result<PoincareReport> {
    if trials < 2 {
        return Err(Error::parameter("poincare check needs trials >= 2"));
    }
    let n = cfg.n() as f64;
    enum BoundKind {
        Plain { constant: f64 },
        LambdaMax { inv_a: f64 },
    }
    let kind = match cfg {
        EnsembleConfig::Hermite(c) => BoundKind::Plain {
            constant: 2.0 / (n * n * c.beta()),
        },
        EnsembleConfig::Manova(c) => {
            if !(c.a() > 0.0 && c.b() > 0.0) {
                return Err(Error::Unsupported(
                    "manova poincare bound needs a > 0 and b > 0".into(),
                ));
            }
            BoundKind::Plain {
                constant: 1.0 / (n * (c.a() + c.b())),
            }
        }
        EnsembleConfig::Laguerre(c) => {
            let a_w = c.beta() / 2.0 * (c.m() - n + 1.0) - 1.0;
            if a_w <= 0.0 {
                return Err(Error::Unsupported(format!(
                    "laguerre poincare bound needs (beta/2)(m - n + 1) - 1 > 0, got {a_w}"
                )));
            }
            BoundKind::LambdaMax { inv_a: 1.0 / a_w }
        }
    };

    let fprime_sq = f.derivative().square();
    let cfg = *cfg;
    let (rows, _) = run_trials(trials, seed, |stream| {
        let j = cfg.sample(stream)?;
        let ln = empirical_measure(&j)?;
        let grad_stat = ln.linear_statistic(|x| fprime_sq.eval(x));
        let f_stat = ln.linear_statistic(|x| f.eval(x));
        let lambda_max = ln.points().last().copied().unwrap_or(0.0);
        Ok((f_stat, grad_stat, lambda_max))
    })?;

    let f_samples: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let lhs_summary = summarize(&f_samples);
    let lhs = lhs_summary.variance;

    let rhs_samples: Vec<f64> = match kind {
        BoundKind::Plain { constant } => rows.iter().map(|r| constant * r.1).collect(),
        BoundKind::LambdaMax { inv_a } => {
            rows.iter().map(|r| inv_a * r.2 * r.2 / n * r.1).collect()
        }
    };
    let rhs_summary = summarize(&rhs_samples);
    let rhs = rhs_summary.mean;
    let rhs_se = (rhs_summary.variance / rhs_samples.len() as f64).sqrt();

    let (ratio, ratio_se) = if lhs == 0.0 {
        (0.0, 0.0)
    } else if rhs == 0.0 {
        (f64::INFINITY, 0.0)
    } else {
        let r = lhs / rhs;
        let rel = (lhs_summary.variance_se / lhs).hypot(rhs_se / rhs);
        (r, r * rel)
    };

    Ok(PoincareReport {
        trials,
        lhs,
        rhs,
        ratio,
        ratio_se,
        holds: ratio <= 1.0 + 5.0 * ratio_se,
    })
}

// ---------------------------------------------------------------------------
// Entry fluctuations
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct FluctuationReport {
    pub trials: usize,
    pub entry: EntryIndex,
    pub limit_value: f64,
    /// Sample mean of `sqrt(n beta) (entry - limit)`; target 0.
    pub sample_mean: f64,
    pub mean_se: f64,
    pub sample_variance: f64,
    /// Closed-form delta-method variance target.
    pub target_variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub ks_vs_normal: f64,
}

/// Samples `sqrt(n beta) (entry - limit entry)` across trials and reports
/// location, spread against the closed-form target, and normality
/// diagnostics.
pub fn entry_fluctuation_check(
    cfg: &EnsembleConfig,
    entry: EntryIndex,
    trials: usize,
    seed: u64,
) -> Result<FluctuationReport> {
    if trials < 2 {
        return Err(Error::parameter("fluctuation check needs trials >= 2"));
    }
    let limit_value = limit_entry(cfg, entry)?;
    let target_variance = entry_fluctuation_variance(cfg, entry)?;
    let scale = (cfg.n() as f64 * cfg.beta()).sqrt();
    let cfg = *cfg;
    let (samples, _) = run_trials(trials, seed, move |stream| {
        let j = cfg.sample(stream)?;
        Ok(scale * (entry.extract(&j)? - limit_value))
    })?;
    let summary = summarize(&samples);
    Ok(FluctuationReport {
        trials,
        entry,
        limit_value,
        sample_mean: summary.mean,
        mean_se: (summary.variance / samples.len() as f64).sqrt(),
        sample_variance: summary.variance,
        target_variance,
        skewness: summary.skewness,
        excess_kurtosis: summary.excess_kurtosis,
        ks_vs_normal: ks_vs_fitted_normal(&samples),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{HermiteConfig, LaguerreConfig, ManovaConfig};

    fn hermite(n: usize, beta: f64) -> EnsembleConfig {
        EnsembleConfig::Hermite(HermiteConfig::new(n, beta).unwrap())
    }

    #[test]
    fn kolmogorov_identical_measures() {
        let mu = SpectralMeasure::new(vec![(0.0, 0.25), (1.0, 0.75)]).unwrap();
        assert_eq!(kolmogorov_distance(&mu, &mu), 0.0);
    }

    #[test]
    fn kolmogorov_disjoint_atoms() {
        let d0 = SpectralMeasure::new(vec![(0.0, 1.0)]).unwrap();
        let d1 = SpectralMeasure::new(vec![(1.0, 1.0)]).unwrap();
        assert_eq!(kolmogorov_distance(&d0, &d1), 1.0);
    }

    #[test]
    fn kolmogorov_shared_grid_example() {
        let mu = SpectralMeasure::new(vec![(0.0, 0.5), (1.0, 0.3), (2.0, 0.2)]).unwrap();
        let ln = EmpiricalMeasure::new(vec![0.0, 1.0, 2.0]).unwrap();
        let d = kolmogorov_distance(&mu, &ln);
        assert!((d - 1.0 / 6.0).abs() < 1e-15, "d = {d}");
        assert_eq!(kolmogorov_distance(&mu, &ln), kolmogorov_distance(&ln, &mu));
    }

    #[test]
    fn clt_constant_function_is_degenerate() {
        let cfg = ExperimentConfig {
            ensemble: hermite(50, 2.0),
            test_function: Polynomial::constant(3.5),
            trials: 200,
            seed: 1,
        };
        let report = clt_experiment(&cfg).unwrap();
        assert!(report.scaled_samples.iter().all(|&s| s == 0.0));
        assert_eq!(report.sample_variance, 0.0);
        assert_eq!(report.target_sigma2, 0.0);
        assert!(report.skewness.is_none());
    }

    #[test]
    fn clt_small_trial_count_reports_variance_only() {
        let cfg = ExperimentConfig {
            ensemble: hermite(50, 2.0),
            test_function: Polynomial::monomial(1),
            trials: 50,
            seed: 1,
        };
        let report = clt_experiment(&cfg).unwrap();
        assert!(report.skewness.is_none());
        assert!(report.ks_vs_normal.is_none());
        assert!(report.sample_variance > 0.0);
    }

    #[test]
    fn clt_hermite_linear_statistic() {
        // f = x: <mu_n, x> = a_1 ~ N(0, 2/(n beta)); scaled variance -> 1
        let cfg = ExperimentConfig {
            ensemble: hermite(200, 2.0),
            test_function: Polynomial::monomial(1),
            trials: 2000,
            seed: 7,
        };
        let report = clt_experiment(&cfg).unwrap();
        assert!((report.target_sigma2 - 1.0).abs() < 1e-10);
        assert!(
            (report.sample_variance - 1.0).abs() < 0.15,
            "variance {}",
            report.sample_variance
        );
        let skew = report.skewness.unwrap();
        assert!(skew.abs() < 0.2, "skewness {skew}");
    }

    #[test]
    fn clt_is_deterministic_across_worker_counts() {
        let cfg = ExperimentConfig {
            ensemble: hermite(100, 2.0),
            test_function: Polynomial::monomial(2),
            trials: 300,
            seed: 42,
        };
        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let pool8 = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap();
        let r1 = pool1.install(|| clt_experiment(&cfg)).unwrap();
        let r8 = pool8.install(|| clt_experiment(&cfg)).unwrap();
        assert_eq!(r1.scaled_samples, r8.scaled_samples);
        assert_eq!(r1.sample_variance.to_bits(), r8.sample_variance.to_bits());
    }

    #[test]
    fn lln_zeroth_moment_error_is_zero() {
        let report =
            lln_experiment(EnsembleFamily::Hermite { beta: 2.0 }, &[40, 80], 2, 10, 3).unwrap();
        for point in &report.points {
            assert_eq!(point.median_moment_errors[0], 0.0);
            assert!(point.median_kolmogorov > 0.0);
        }
    }

    #[test]
    fn lln_rejects_bad_schedules() {
        let fam = EnsembleFamily::Hermite { beta: 2.0 };
        assert!(lln_experiment(fam, &[], 2, 5, 0).is_err());
        assert!(lln_experiment(fam, &[100, 100], 2, 5, 0).is_err());
        assert!(lln_experiment(fam, &[200, 100], 2, 5, 0).is_err());
    }

    #[test]
    fn mean_identity_analytic_residual_vanishes() {
        let report = mean_identity_check(
            &hermite(60, 2.0),
            &Polynomial::new(vec![0.0, 0.0, 0.0, 1.0]),
            150,
            11,
        )
        .unwrap();
        assert!(
            report.max_analytic_residual < 1e-12,
            "residual {}",
            report.max_analytic_residual
        );
        assert!(
            report.paired_mean_difference.abs() <= 4.0 * report.paired_se,
            "paired diff {} vs se {}",
            report.paired_mean_difference,
            report.paired_se
        );
    }

    #[test]
    fn mean_identity_constant_function() {
        // <mu, 1> and <L, 1> are both exactly 1; the conditional-mean route
        // accumulates one rounding step per atom
        let report =
            mean_identity_check(&hermite(20, 1.0), &Polynomial::constant(1.0), 100, 5).unwrap();
        assert!(report.max_analytic_residual < 1e-14);
        assert!(report.paired_mean_difference.abs() < 1e-14);
    }

    #[test]
    fn variance_identity_two_point_case() {
        // lambda = (0,1), beta = 2, f = x: Var = 1/12 analytically
        let spectrum = EmpiricalMeasure::new(vec![0.0, 1.0]).unwrap();
        let report =
            variance_identity_check(&spectrum, 2.0, &Polynomial::monomial(1), 100_000, 13).unwrap();
        assert!(
            (report.closed_form - 1.0 / 12.0).abs() < 1e-15,
            "closed form {}",
            report.closed_form
        );
        assert!((report.relation_rhs - 1.0 / 12.0).abs() < 1e-15);
        assert!(
            (report.mc_variance - report.closed_form).abs() <= 5.0 * report.mc_se,
            "mc {} vs closed {} (se {})",
            report.mc_variance,
            report.closed_form,
            report.mc_se
        );
    }

    #[test]
    fn variance_identity_constant_function() {
        let spectrum = EmpiricalMeasure::new(vec![-1.0, 0.0, 2.0]).unwrap();
        let report =
            variance_identity_check(&spectrum, 1.0, &Polynomial::constant(2.0), 1000, 17).unwrap();
        assert!(report.closed_form.abs() < 1e-12);
        assert_eq!(report.mc_variance, 0.0);
    }

    #[test]
    fn poincare_hermite_bound_holds() {
        let report =
            poincare_bound_check(&hermite(100, 2.0), &Polynomial::monomial(2), 500, 19).unwrap();
        assert!(
            report.holds,
            "ratio {} se {}",
            report.ratio, report.ratio_se
        );
        assert!(report.ratio < 1.0, "expected slack, ratio {}", report.ratio);
    }

    #[test]
    fn poincare_constant_function_ratio_zero() {
        let report =
            poincare_bound_check(&hermite(50, 2.0), &Polynomial::constant(5.0), 100, 23).unwrap();
        assert_eq!(report.ratio, 0.0);
        assert!(report.holds);
    }

    #[test]
    fn poincare_unsupported_configs() {
        let manova = EnsembleConfig::Manova(ManovaConfig::new(50, 2.0, 0.0, 5.0).unwrap());
        assert!(matches!(
            poincare_bound_check(&manova, &Polynomial::monomial(1), 100, 1),
            Err(Error::Unsupported(_))
        ));
        // beta (m - n + 1)/2 - 1 <= 0
        let laguerre = EnsembleConfig::Laguerre(LaguerreConfig::new(50, 50.5, 1.0).unwrap());
        assert!(matches!(
            poincare_bound_check(&laguerre, &Polynomial::monomial(1), 100, 1),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn poincare_laguerre_bound_holds() {
        let cfg = EnsembleConfig::Laguerre(LaguerreConfig::new(100, 200.0, 2.0).unwrap());
        let report = poincare_bound_check(&cfg, &Polynomial::monomial(1), 500, 29).unwrap();
        assert!(report.holds, "ratio {}", report.ratio);
    }

    #[test]
    fn fluctuation_check_index_bounds() {
        let cfg = hermite(100, 1.0);
        assert!(matches!(
            entry_fluctuation_check(&cfg, EntryIndex::Diag(100), 10, 1),
            Err(Error::Index(_))
        ));
        assert!(matches!(
            entry_fluctuation_check(&cfg, EntryIndex::Offdiag(99), 10, 1),
            Err(Error::Index(_))
        ));
    }

    #[test]
    fn fluctuation_hermite_diag_exact_law() {
        // sqrt(n beta) a_1 is N(0,2) exactly at any n
        let report =
            entry_fluctuation_check(&hermite(500, 1.0), EntryIndex::Diag(0), 3000, 31).unwrap();
        assert!(
            (report.sample_variance - 2.0).abs() < 0.3,
            "var {}",
            report.sample_variance
        );
        assert!(report.sample_mean.abs() <= 5.0 * report.mean_se);
        assert!(report.ks_vs_normal < 0.05, "ks {}", report.ks_vs_normal);
    }

    #[test]
    fn summarize_moments_of_known_sample() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let s = summarize(&xs);
        assert_eq!(s.mean, 2.5);
        assert!((s.variance - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.skewness, 0.0);
    }

    #[test]
    fn erf_reference_values() {
        // the rational approximation carries ~1.5e-7 absolute error
        assert!(erf(0.0).abs() < 1e-6);
        assert!((erf(1.0) - 0.8427007929).abs() < 1e-6);
        assert!((normal_cdf(1.959963985) - 0.975).abs() < 1e-5);
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-6);
    }
}
