//! The exact weight-moment identities behind the CLT: the mean identity
//! `E[<mu_n, f>] = E[<L_n, f>]` (which holds conditionally on the spectrum),
//! the fixed-spectrum variance formula, and the Poincare-type bound on
//! `Var[<L_n, f>]`.
//!
//! ```bash
//! cargo run --release --example variance_identities
//! ```

use jacobi_spectra::ensembles::EnsembleConfig;
use jacobi_spectra::stats::{mean_identity_check, poincare_bound_check, variance_identity_check};
use jacobi_spectra::{EmpiricalMeasure, HermiteConfig, Polynomial};

fn main() -> jacobi_spectra::Result<()> {
    let hermite = EnsembleConfig::Hermite(HermiteConfig::new(100, 2.0)?);

    let mean = mean_identity_check(&hermite, &Polynomial::monomial(3), 500, 1)?;
    println!("mean identity, Hermite n=100, f = x^3, 500 paired draws:");
    println!(
        "  max per-draw |conditional mean - <L_n,f>| = {:.2e}",
        mean.max_analytic_residual
    );
    println!(
        "  paired MC difference {:+.2e} (SE {:.2e})\n",
        mean.paired_mean_difference, mean.paired_se
    );

    let spectrum = EmpiricalMeasure::new(vec![0.0, 1.0])?;
    let var = variance_identity_check(&spectrum, 2.0, &Polynomial::monomial(1), 100_000, 2)?;
    println!("fixed-spectrum variance, lambda = (0,1), beta = 2, f = x:");
    println!(
        "  closed form      {:.8}  (exact value 1/12 = {:.8})",
        var.closed_form,
        1.0 / 12.0
    );
    println!("  variance relation {:.8}", var.relation_rhs);
    println!(
        "  Monte Carlo       {:.8}  (SE {:.1e}, 100k weight draws)\n",
        var.mc_variance, var.mc_se
    );

    let bound = poincare_bound_check(
        &EnsembleConfig::Hermite(HermiteConfig::new(200, 2.0)?),
        &Polynomial::monomial(2),
        2000,
        3,
    )?;
    println!("Poincare bound, Hermite n=200, f = x^2, 2000 draws:");
    println!(
        "  Var[<L_n,f>] = {:.3e}  vs bound {:.3e}  (ratio {:.3})",
        bound.lhs, bound.rhs, bound.ratio
    );
    println!("  bound holds: {}", bound.holds);
    Ok(())
}
