//! Tridiagonal matrix models of the Gaussian (Hermite), Wishart (Laguerre)
//! and MANOVA (Jacobi) beta ensembles, the spectral measures they carry, and
//! a Monte Carlo workbench that checks their limit laws, central limit
//! theorems and variance identities numerically.
//!
//! The spectral measure of a finite Jacobi matrix `J` is the atomic
//! probability measure with the eigenvalues of `J` as atoms and the squared
//! first eigenvector components as weights; equivalently, the unique measure
//! whose k-th moment is `J^k(1,1)`. For all three ensembles the spectral
//! measures converge to a classical limit law (semicircle, Marchenko-Pastur,
//! Kesten-McKay), and the scaled linear statistics
//! `sqrt(n beta / 2)(<mu_n, f> - E<mu_n, f>)` are asymptotically normal with
//! variance `Var_limit[f]`. This crate samples the models, computes the
//! measures, and makes every one of those statements a falsifiable check.
//!
//! # Start with the examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release --example sample_ensembles     # the three matrix models
//! cargo run --release --example spectral_measure     # atoms, weights, moment oracle
//! cargo run --release --example limit_densities      # sc / mp / kmk closed forms
//! cargo run --release --example stieltjes_inversion  # density recovery from m-functions
//! cargo run --release --example lln_convergence      # moment and d_K decay in n
//! cargo run --release --example clt_experiment       # CLT variances and shape
//! cargo run --release --example variance_identities  # weight-moment identities, bounds
//! cargo run --release --example entry_fluctuations   # per-entry Gaussian fluctuations
//! cargo run --release --example density_files        # plot-ready CSV output
//! ```
//!
//! The `jspec` binary wraps the same functionality for batch use
//! (`sample`, `spectrum`, `density`, `clt`, `verify`); the acceptance suite
//! behind `jspec verify` also runs as `cargo test --release --test acceptance`.
//!
//! # Module map
//!
//! - [`distributions`]: seeded, reproducible scalar samplers ([`distributions::RngStream`]).
//! - [`ensembles`]: the three matrix models and their limit matrices.
//! - [`spectral`]: tridiagonal eigensolver, spectral/empirical measures,
//!   the `J^k(1,1)` moment oracle, discrete m-functions.
//! - [`limit_laws`]: closed-form densities, Stieltjes transforms, quadrature
//!   moments, the CLT variance functional, Stieltjes inversion.
//! - [`stats`]: Monte Carlo experiments (LLN, CLT, identities, bounds).
//! - [`verify`]: the acceptance criteria as library functions.
//! - [`cli`]: file formats and command plumbing for `jspec`.

pub mod cli;
pub mod distributions;
pub mod ensembles;
pub mod error;
pub mod jacobi;
pub mod limit_laws;
pub mod poly;
pub mod quadrature;
pub mod spectral;
pub mod stats;
pub mod verify;

pub use ensembles::{EnsembleConfig, HermiteConfig, LaguerreConfig, ManovaConfig};
pub use error::{Error, Result};
pub use jacobi::JacobiMatrix;
pub use limit_laws::LimitLaw;
pub use poly::Polynomial;
pub use spectral::{EmpiricalMeasure, SpectralMeasure};
