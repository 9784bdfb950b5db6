//! Gaussian fluctuations of individual matrix entries: the variance of
//! `sqrt(n beta)(entry - limit)` matches the closed-form targets coming from
//! the chi and Beta central limit theorems.
//!
//! ```bash
//! cargo run --release --example entry_fluctuations
//! ```

use jacobi_spectra::ensembles::{EnsembleConfig, EntryIndex};
use jacobi_spectra::stats::entry_fluctuation_check;
use jacobi_spectra::{HermiteConfig, LaguerreConfig, ManovaConfig};

fn main() -> jacobi_spectra::Result<()> {
    let runs = [
        (
            "hermite diag",
            EnsembleConfig::Hermite(HermiteConfig::new(10_000, 1.0)?),
            EntryIndex::Diag(0),
        ),
        (
            "hermite offdiag",
            EnsembleConfig::Hermite(HermiteConfig::new(10_000, 1.0)?),
            EntryIndex::Offdiag(0),
        ),
        (
            "laguerre offdiag (gamma=1/2)",
            EnsembleConfig::Laguerre(LaguerreConfig::new(2000, 4000.0, 1.0)?),
            EntryIndex::Offdiag(0),
        ),
        (
            "manova bulk diag (arcsine)",
            EnsembleConfig::Manova(ManovaConfig::new(2000, 2.0, 0.0, 0.0)?),
            EntryIndex::Diag(1),
        ),
    ];

    println!("scaled entry fluctuations, 2000 trials each:");
    println!("  case                           variance    target    mean       KS");
    for (name, cfg, entry) in runs {
        let report = entry_fluctuation_check(&cfg, entry, 2000, 17)?;
        println!(
            "  {name:<28}   {:>7.4}    {:>6.4}   {:+.4}   {:.4}",
            report.sample_variance, report.target_variance, report.sample_mean, report.ks_vs_normal
        );
    }
    Ok(())
}
