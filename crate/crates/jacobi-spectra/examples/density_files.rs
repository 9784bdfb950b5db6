//! Produce the same plot-ready files the `jspec` binary emits, straight from
//! the library: a sampled matrix, its spectrum, and a density table with an
//! inversion column.
//!
//! ```bash
//! cargo run --release --example density_files
//! ```

use jacobi_spectra::cli::{
    cmd_density, cmd_sample, cmd_spectrum, DensityArgs, Output, SpectrumSource,
};
use jacobi_spectra::ensembles::EnsembleConfig;
use jacobi_spectra::{HermiteConfig, LimitLaw};

fn main() -> jacobi_spectra::Result<()> {
    let dir = std::env::temp_dir().join("jacobi-spectra-example");
    std::fs::create_dir_all(&dir)?;

    let ensemble = EnsembleConfig::Hermite(HermiteConfig::new(500, 2.0)?);
    let matrix_path = dir.join("hermite.csv");
    cmd_sample(&ensemble, 7, &Output::File(matrix_path.clone()))?;

    let spectrum_path = dir.join("spectrum.csv");
    cmd_spectrum(
        &SpectrumSource::MatrixFile(matrix_path.clone()),
        &Output::File(spectrum_path.clone()),
    )?;

    let density_path = dir.join("semicircle.csv");
    cmd_density(
        &DensityArgs {
            law: LimitLaw::Semicircle,
            grid: 101,
            inversion_schedule: Some(vec![1e-2, 1e-3, 1e-4]),
        },
        &Output::File(density_path.clone()),
    )?;

    println!("wrote {}", matrix_path.display());
    println!("wrote {}", spectrum_path.display());
    println!("wrote {}", density_path.display());
    println!("\nhistogram the spectrum column against the density table to see the semicircle.");
    Ok(())
}
