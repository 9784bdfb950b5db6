//! Tabulate the three limit densities, confirm each integrates to one, and
//! show the Kesten-McKay law collapsing to the arcsine distribution at
//! `kappa_a = kappa_b = 0`.
//!
//! ```bash
//! cargo run --release --example limit_densities
//! ```

use jacobi_spectra::LimitLaw;

fn main() -> jacobi_spectra::Result<()> {
    let laws = [
        ("semicircle", LimitLaw::Semicircle),
        (
            "marchenko-pastur gamma=0.25",
            LimitLaw::marchenko_pastur(0.25)?,
        ),
        (
            "kesten-mckay kappa=(1,0.5)",
            LimitLaw::kesten_mckay(1.0, 0.5)?,
        ),
    ];

    for (name, law) in laws {
        let (lo, hi) = law.edges();
        let mass = law.integrate(|_| 1.0);
        println!("{name}: support [{lo:.4}, {hi:.4}], quadrature mass {mass:.12}");
        for i in 0..5 {
            let x = lo + (hi - lo) * (i as f64 + 0.5) / 5.0;
            println!("  rho({x:>8.4}) = {:.6}", law.density(x));
        }
        println!(
            "  moments: m1 = {:.6}, m2 = {:.6}, Var(x) = {:.6}\n",
            law.moment(1),
            law.moment(2),
            law.variance_functional(&jacobi_spectra::Polynomial::monomial(1)),
        );
    }

    let arcsine = LimitLaw::kesten_mckay(0.0, 0.0)?;
    println!("kesten-mckay(0,0) against the arcsine density 1/(pi sqrt(x(1-x))):");
    let mut worst = 0.0f64;
    for i in 1..100 {
        let x = i as f64 / 100.0;
        let reference = 1.0 / (std::f64::consts::PI * (x * (1.0 - x)).sqrt());
        worst = worst.max((arcsine.density(x) - reference).abs());
    }
    println!("  max pointwise difference on the interior grid: {worst:.2e}");
    Ok(())
}
