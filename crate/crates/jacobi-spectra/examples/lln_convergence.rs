//! Law of large numbers for spectral measures: the moment deviations from
//! the limit law and the Kolmogorov distance between the empirical and
//! spectral measures both shrink as `n` grows.
//!
//! ```bash
//! cargo run --release --example lln_convergence
//! ```

use jacobi_spectra::stats::{lln_experiment, EnsembleFamily};

fn main() -> jacobi_spectra::Result<()> {
    let report = lln_experiment(
        EnsembleFamily::Hermite { beta: 2.0 },
        &[100, 400, 1600],
        4,
        50,
        5,
    )?;

    println!("Hermite beta=2, 50 trials per size, medians over trials:");
    println!("     n    |m2 - 1|      |m4 - 2|      d_K(L_n, mu_n)");
    for point in &report.points {
        println!(
            "  {:>4}    {:.6}      {:.6}      {:.6}",
            point.n,
            point.median_moment_errors[2],
            point.median_moment_errors[4],
            point.median_kolmogorov
        );
    }
    println!("\nboth columns shrink roughly like 1/sqrt(n beta).");
    Ok(())
}
