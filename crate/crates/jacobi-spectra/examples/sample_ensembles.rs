//! Draw one matrix from each of the three tridiagonal models and compare the
//! leading entries with the entries of the non-random limit matrix.
//!
//! ```bash
//! cargo run --release --example sample_ensembles
//! ```

use jacobi_spectra::distributions::RngStream;
use jacobi_spectra::ensembles::{limit_matrix, EnsembleConfig};
use jacobi_spectra::{HermiteConfig, LaguerreConfig, ManovaConfig};

fn main() -> jacobi_spectra::Result<()> {
    let n = 5000;
    let configs = [
        EnsembleConfig::Hermite(HermiteConfig::new(n, 2.0)?),
        EnsembleConfig::Laguerre(LaguerreConfig::new(n, 2.0 * n as f64, 2.0)?),
        EnsembleConfig::Manova(ManovaConfig::new(n, 2.0, 0.0, 0.0)?),
    ];

    for cfg in &configs {
        let mut stream = RngStream::new(2024).substream(cfg.n() as u64);
        let j = cfg.sample(&mut stream)?;
        let law = cfg.limit_law()?;
        let limit = limit_matrix(law, 4);

        println!("{} (n = {n}, limit law {:?})", cfg.label(), law);
        println!("  entry      sampled      limit");
        for i in 0..3 {
            println!(
                "  a_{}     {:>9.5}    {:>9.5}",
                i + 1,
                j.diag()[i],
                limit.diag()[i]
            );
        }
        for i in 0..3 {
            println!(
                "  b_{}     {:>9.5}    {:>9.5}",
                i + 1,
                j.offdiag()[i],
                limit.offdiag()[i]
            );
        }
        println!();
    }
    Ok(())
}
