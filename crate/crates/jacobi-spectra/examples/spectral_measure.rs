//! Compute the spectral measure of a Hermite draw and cross-check its
//! moments against the mat-vec oracle `J^k(1,1)`.
//!
//! ```bash
//! cargo run --release --example spectral_measure
//! ```

use jacobi_spectra::distributions::RngStream;
use jacobi_spectra::spectral::{moment_oracle, spectral_measure};
use jacobi_spectra::HermiteConfig;

fn main() -> jacobi_spectra::Result<()> {
    let cfg = HermiteConfig::new(10, 2.0)?;
    let mut stream = RngStream::new(7);
    let j = jacobi_spectra::ensembles::sample_hermite(&cfg, &mut stream)?;

    let mu = spectral_measure(&j)?;
    println!("spectral measure of a 10x10 Hermite draw (seed 7):");
    println!("  lambda        weight");
    for &(lambda, weight) in mu.atoms() {
        println!("  {lambda:>10.6}  {weight:>10.6}");
    }

    println!("\nmoments: atoms vs J^k(1,1) oracle");
    println!("   k   sum w lambda^k      J^k(1,1)       |diff|");
    for k in 0..=8u32 {
        let by_atoms = mu.moment(k);
        let by_oracle = moment_oracle(&j, k);
        println!(
            "  {k:>2}   {by_atoms:>14.10}  {by_oracle:>14.10}   {:.2e}",
            (by_atoms - by_oracle).abs()
        );
    }
    Ok(())
}
