//! Recover the semicircle density by Stieltjes inversion, first from the
//! closed-form m-function, then from the discrete m-function of a single
//! 2000-atom Hermite spectral measure. The atomic case needs an epsilon
//! schedule that stays above the atom spacing.
//!
//! ```bash
//! cargo run --release --example stieltjes_inversion
//! ```

use jacobi_spectra::distributions::RngStream;
use jacobi_spectra::limit_laws::stieltjes_inversion;
use jacobi_spectra::spectral::{discrete_m_function, spectral_measure};
use jacobi_spectra::{HermiteConfig, LimitLaw};

fn main() -> jacobi_spectra::Result<()> {
    let sc = LimitLaw::Semicircle;

    println!("closed-form m-function, schedule (1e-2, 1e-3, 1e-4):");
    println!("      x    recovered     density      |diff|");
    for x in [-1.5, -0.75, 0.0, 0.75, 1.5, 3.0] {
        let est = stieltjes_inversion(|z| sc.stieltjes(z).unwrap(), x, &[1e-2, 1e-3, 1e-4])?;
        let truth = sc.density(x);
        println!(
            "  {x:>5.2}   {est:>9.6}   {truth:>9.6}   {:.2e}",
            (est - truth).abs()
        );
    }

    let n = 2000;
    let cfg = HermiteConfig::new(n, 2.0)?;
    let mut stream = RngStream::new(11);
    let j = jacobi_spectra::ensembles::sample_hermite(&cfg, &mut stream)?;
    let mu = spectral_measure(&j)?;

    // mean atom spacing ~ 4/n; keep epsilon well above it
    let schedule = [0.3, 0.2, 0.1];
    println!(
        "\ndiscrete m-function of a {n}-atom Hermite spectral measure, schedule {schedule:?}:"
    );
    println!("      x    recovered     density      |diff|");
    for x in [-1.0, 0.0, 1.0] {
        let est = stieltjes_inversion(|z| discrete_m_function(&mu, z).unwrap(), x, &schedule)?;
        let truth = sc.density(x);
        println!(
            "  {x:>5.2}   {est:>9.6}   {truth:>9.6}   {:.2e}",
            (est - truth).abs()
        );
    }
    Ok(())
}
