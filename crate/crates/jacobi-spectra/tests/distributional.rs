//! Distribution-level checks that need many independent draws: the sign-flip
//! symmetry of the Hermite eigenvalue law, almost-sure entry convergence to
//! the limit matrix, and CLT shape diagnostics at scale.

use jacobi_spectra::distributions::RngStream;
use jacobi_spectra::ensembles::{
    limit_matrix, sample_hermite, EnsembleConfig, HermiteConfig, LaguerreConfig, ManovaConfig,
};
use jacobi_spectra::limit_laws::stieltjes_inversion;
use jacobi_spectra::spectral::{discrete_m_function, empirical_measure, spectral_measure};
use jacobi_spectra::stats::{clt_experiment, kolmogorov_distance, ExperimentConfig};
use jacobi_spectra::{EmpiricalMeasure, JacobiMatrix, LimitLaw, Polynomial};

/// The Hermite eigenvalue multiset is invariant in law under negating the
/// diagonal: compare the third-moment statistic of draws against the same
/// statistic of sign-flipped draws via the two-sample Kolmogorov distance.
#[test]
fn hermite_spectrum_symmetric_under_diag_negation() {
    let cfg = HermiteConfig::new(8, 2.0).unwrap();
    let trials = 10_000;
    let root = RngStream::new(77);
    let mut direct = Vec::with_capacity(trials);
    let mut flipped = Vec::with_capacity(trials);
    for t in 0..trials {
        let mut stream = root.substream(t as u64);
        let j = sample_hermite(&cfg, &mut stream).unwrap();
        let spectrum = empirical_measure(&j).unwrap();
        direct.push(spectrum.moment(3));

        let neg =
            JacobiMatrix::new(j.diag().iter().map(|a| -a).collect(), j.offdiag().to_vec()).unwrap();
        let neg_spectrum = empirical_measure(&neg).unwrap();
        // negated-diag spectrum is the mirrored spectrum; the symmetry says
        // the mirrored statistic has the same law as the original
        flipped.push(-neg_spectrum.moment(3));
    }
    let d = kolmogorov_distance(
        &EmpiricalMeasure::new(direct).unwrap(),
        &EmpiricalMeasure::new(flipped).unwrap(),
    );
    assert!(d < 0.05, "two-sample Kolmogorov distance {d}");
}

/// Assumption behind every limit theorem here: sampled entries converge to
/// the non-random limit matrix. At n = 1e5 each tracked entry should sit
/// within 0.05 of its limit in at least 95 of 100 trials.
#[test]
fn entries_converge_to_limit_matrix() {
    let n = 100_000;
    let configs = [
        EnsembleConfig::Hermite(HermiteConfig::new(n, 1.0).unwrap()),
        EnsembleConfig::Laguerre(LaguerreConfig::new(n, 2.0 * n as f64, 1.0).unwrap()),
        EnsembleConfig::Manova(ManovaConfig::new(n, 1.0, 0.0, 0.0).unwrap()),
    ];
    for cfg in configs {
        let limit = limit_matrix(cfg.limit_law().unwrap(), 3);
        let root = RngStream::new(1234);
        let mut good = 0;
        let trials = 100;
        for t in 0..trials {
            let mut stream = root.substream(t);
            let j = cfg.sample(&mut stream).unwrap();
            let ok = (0..2).all(|i| {
                (j.diag()[i] - limit.diag()[i]).abs() < 0.05
                    && (j.offdiag()[i] - limit.offdiag()[i]).abs() < 0.05
            });
            if ok {
                good += 1;
            }
        }
        assert!(
            good >= 95,
            "{}: only {good}/100 trials within 0.05 of the limit entries",
            cfg.label()
        );
    }
}

/// Density recovery from a single atomic spectral measure: with the epsilon
/// schedule held above the mean atom spacing (~4/n here), inversion of the
/// discrete m-function lands near the semicircle density.
#[test]
fn inversion_from_atomic_hermite_measure() {
    let cfg = HermiteConfig::new(2000, 2.0).unwrap();
    let mut stream = RngStream::new(11);
    let j = sample_hermite(&cfg, &mut stream).unwrap();
    let mu = spectral_measure(&j).unwrap();
    let est = stieltjes_inversion(
        |z| discrete_m_function(&mu, z).unwrap(),
        0.0,
        &[0.3, 0.2, 0.1],
    )
    .unwrap();
    let truth = LimitLaw::Semicircle.density(0.0);
    assert!((est - truth).abs() < 0.05, "estimate {est} vs {truth}");
}

/// Normality of the CLT limit: skewness and excess kurtosis of the scaled
/// statistic within 5 standard errors at 2000 trials, for each ensemble.
#[test]
fn clt_shape_diagnostics_within_five_sigma() {
    let trials = 2000;
    let skew_se = (6.0 / trials as f64).sqrt();
    let kurt_se = (24.0 / trials as f64).sqrt();
    let runs = [
        EnsembleConfig::Hermite(HermiteConfig::new(400, 2.0).unwrap()),
        EnsembleConfig::Laguerre(LaguerreConfig::new(400, 800.0, 1.0).unwrap()),
        EnsembleConfig::Manova(ManovaConfig::new(400, 2.0, 0.0, 0.0).unwrap()),
    ];
    for ensemble in runs {
        let report = clt_experiment(&ExperimentConfig {
            ensemble,
            test_function: Polynomial::monomial(1),
            trials,
            seed: 2718,
        })
        .unwrap();
        let skew = report.skewness.unwrap();
        let kurt = report.excess_kurtosis.unwrap();
        assert!(
            skew.abs() < 5.0 * skew_se,
            "{}: skewness {skew} vs 5 SE {}",
            ensemble.label(),
            5.0 * skew_se
        );
        assert!(
            kurt.abs() < 5.0 * kurt_se,
            "{}: kurtosis {kurt} vs 5 SE {}",
            ensemble.label(),
            5.0 * kurt_se
        );
    }
}
