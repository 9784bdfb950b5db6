//! Central limit theorem for linear spectral statistics: the scaled
//! statistic `sqrt(n beta / 2)(<mu_n, f> - mean)` has variance
//! `Var_law[f]` in all three ensembles, with Gaussian shape diagnostics.
//!
//! ```bash
//! cargo run --release --example clt_experiment
//! ```

use jacobi_spectra::ensembles::EnsembleConfig;
use jacobi_spectra::stats::{clt_experiment, ExperimentConfig};
use jacobi_spectra::{HermiteConfig, LaguerreConfig, ManovaConfig, Polynomial};

fn main() -> jacobi_spectra::Result<()> {
    let runs = [
        (
            "hermite, f = x^2",
            EnsembleConfig::Hermite(HermiteConfig::new(400, 2.0)?),
            Polynomial::monomial(2),
        ),
        (
            "laguerre gamma=1/2, f = x",
            EnsembleConfig::Laguerre(LaguerreConfig::new(400, 800.0, 1.0)?),
            Polynomial::monomial(1),
        ),
        (
            "manova a=b=0 (arcsine), f = x",
            EnsembleConfig::Manova(ManovaConfig::new(400, 2.0, 0.0, 0.0)?),
            Polynomial::monomial(1),
        ),
    ];

    for (name, ensemble, test_function) in runs {
        let report = clt_experiment(&ExperimentConfig {
            ensemble,
            test_function,
            trials: 2000,
            seed: 99,
        })?;
        println!("{name} (n = 400, 2000 trials)");
        println!(
            "  sample variance {:.4}  vs  sigma^2(f) = {:.4}",
            report.sample_variance, report.target_sigma2
        );
        println!(
            "  skewness {:+.4}, excess kurtosis {:+.4}, KS vs fitted normal {:.4}\n",
            report.skewness.unwrap(),
            report.excess_kurtosis.unwrap(),
            report.ks_vs_normal.unwrap()
        );
    }
    Ok(())
}
