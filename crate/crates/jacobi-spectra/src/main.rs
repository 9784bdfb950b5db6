//! `jspec`: thin command-line front-end over the library. All real work
//! lives in `jacobi_spectra::cli`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use jacobi_spectra::cli::{
    cmd_clt, cmd_density, cmd_sample, cmd_spectrum, cmd_verify, DensityArgs, Output, SpectrumSource,
};
use jacobi_spectra::ensembles::{EnsembleConfig, HermiteConfig, LaguerreConfig, ManovaConfig};
use jacobi_spectra::stats::ExperimentConfig;
use jacobi_spectra::verify::{Suite, DEFAULT_SEED};
use jacobi_spectra::{Error, LimitLaw, Polynomial};

#[derive(Parser)]
#[command(
    name = "jspec",
    version,
    about = "Sample tridiagonal beta-ensemble matrices, compute spectral measures, and verify their limit laws"
)]
struct CliArgs {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one matrix and emit it as CSV (index,diag,offdiag)
    Sample {
        #[command(flatten)]
        ensemble: EnsembleFlags,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues and weights of a matrix as CSV (lambda,weight)
    Spectrum {
        /// Matrix CSV to read instead of sampling inline
        #[arg(long, conflicts_with = "ensemble")]
        input: Option<PathBuf>,
        #[command(flatten)]
        ensemble: EnsembleFlags,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate a limit-law density (CSV columns x, density, and optionally
    /// the inversion estimate)
    Density {
        /// Law: sc, mp or kmk
        #[arg(long)]
        law: String,
        /// Marchenko-Pastur aspect ratio, required for --law mp
        #[arg(long)]
        gamma: Option<f64>,
        /// Kesten-McKay kappa_a, required for --law kmk
        #[arg(long)]
        ka: Option<f64>,
        /// Kesten-McKay kappa_b, required for --law kmk
        #[arg(long)]
        kb: Option<f64>,
        /// Number of grid points across the support plus 5% margins
        #[arg(long, default_value_t = 201)]
        grid: usize,
        /// Add a Stieltjes-inversion estimate column
        #[arg(long)]
        inversion: bool,
        /// Comma-separated decreasing epsilon schedule for --inversion
        #[arg(long, default_value = "1e-2,1e-3,1e-4")]
        eps: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a CLT experiment and emit the JSON report
    Clt {
        #[command(flatten)]
        ensemble: EnsembleFlags,
        /// Test-function coefficients, comma-separated ascending degree
        #[arg(long, default_value = "0,1")]
        f: String,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Worker threads (default: JSPEC_WORKERS or the rayon default)
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite; exit 0 iff every criterion passes
    Verify {
        #[arg(long, value_parser = ["quick", "full"], default_value = "full")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EnsembleFlags {
    /// Ensemble: hermite, laguerre or manova
    #[arg(long)]
    ensemble: Option<String>,
    /// Matrix size
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    /// Laguerre sample-count parameter (real, > n - 1)
    #[arg(long)]
    m: Option<f64>,
    /// MANOVA exponent a (> -1)
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// MANOVA exponent b (> -1)
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
}

impl EnsembleFlags {
    fn build(&self) -> Result<EnsembleConfig, Error> {
        let kind = self
            .ensemble
            .as_deref()
            .ok_or_else(|| Error::Parameter("--ensemble is required".into()))?;
        let n = self
            .n
            .ok_or_else(|| Error::Parameter("--n is required".into()))?;
        match kind {
            "hermite" => {
                if self.m.is_some() || self.a.is_some() || self.b.is_some() {
                    return Err(Error::Parameter(
                        "--m/--a/--b do not apply to the hermite ensemble".into(),
                    ));
                }
                Ok(EnsembleConfig::Hermite(HermiteConfig::new(n, self.beta)?))
            }
            "laguerre" => {
                if self.a.is_some() || self.b.is_some() {
                    return Err(Error::Parameter(
                        "--a/--b do not apply to the laguerre ensemble".into(),
                    ));
                }
                let m = self
                    .m
                    .ok_or_else(|| Error::Parameter("laguerre requires --m".into()))?;
                Ok(EnsembleConfig::Laguerre(LaguerreConfig::new(
                    n, m, self.beta,
                )?))
            }
            "manova" => {
                if self.m.is_some() {
                    return Err(Error::Parameter(
                        "--m does not apply to the manova ensemble".into(),
                    ));
                }
                let a = self
                    .a
                    .ok_or_else(|| Error::Parameter("manova requires --a".into()))?;
                let b = self
                    .b
                    .ok_or_else(|| Error::Parameter("manova requires --b".into()))?;
                Ok(EnsembleConfig::Manova(ManovaConfig::new(
                    n, self.beta, a, b,
                )?))
            }
            other => Err(Error::Parameter(format!(
                "unknown ensemble {other:?}; expected hermite, laguerre or manova"
            ))),
        }
    }
}

fn parse_f64_list(text: &str, what: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parameter(format!("bad {what} entry {tok:?}")))
        })
        .collect()
}

fn build_law(
    law: &str,
    gamma: Option<f64>,
    ka: Option<f64>,
    kb: Option<f64>,
) -> Result<LimitLaw, Error> {
    match law {
        "sc" => {
            if gamma.is_some() || ka.is_some() || kb.is_some() {
                return Err(Error::Parameter(
                    "--gamma/--ka/--kb do not apply to --law sc".into(),
                ));
            }
            Ok(LimitLaw::Semicircle)
        }
        "mp" => {
            let gamma =
                gamma.ok_or_else(|| Error::Parameter("--law mp requires --gamma".into()))?;
            LimitLaw::marchenko_pastur(gamma)
        }
        "kmk" => {
            let ka = ka.ok_or_else(|| Error::Parameter("--law kmk requires --ka".into()))?;
            let kb = kb.ok_or_else(|| Error::Parameter("--law kmk requires --kb".into()))?;
            LimitLaw::kesten_mckay(ka, kb)
        }
        other => Err(Error::Parameter(format!(
            "unknown law {other:?}; expected sc, mp or kmk"
        ))),
    }
}

fn run(cli: CliArgs) -> Result<bool, Error> {
    match cli.command {
        Command::Sample {
            ensemble,
            seed,
            out,
        } => {
            cmd_sample(&ensemble.build()?, seed, &Output::from_path(out))?;
            Ok(true)
        }
        Command::Spectrum {
            input,
            ensemble,
            seed,
            out,
        } => {
            let source = match input {
                Some(path) => SpectrumSource::MatrixFile(path),
                None => SpectrumSource::Ensemble {
                    config: ensemble.build()?,
                    seed,
                },
            };
            cmd_spectrum(&source, &Output::from_path(out))?;
            Ok(true)
        }
        Command::Density {
            law,
            gamma,
            ka,
            kb,
            grid,
            inversion,
            eps,
            out,
        } => {
            let schedule = if inversion {
                Some(parse_f64_list(&eps, "--eps")?)
            } else {
                None
            };
            let args = DensityArgs {
                law: build_law(&law, gamma, ka, kb)?,
                grid,
                inversion_schedule: schedule,
            };
            cmd_density(&args, &Output::from_path(out))?;
            Ok(true)
        }
        Command::Clt {
            ensemble,
            f,
            trials,
            seed,
            workers,
            out,
        } => {
            let cfg = ExperimentConfig {
                ensemble: ensemble.build()?,
                test_function: Polynomial::new(parse_f64_list(&f, "--f")?),
                trials,
                seed,
            };
            cmd_clt(&cfg, workers, &Output::from_path(out))?;
            Ok(true)
        }
        Command::Verify { suite, seed, out } => {
            let suite = if suite == "quick" {
                Suite::Quick
            } else {
                Suite::Full
            };
            cmd_verify(suite, seed, &Output::from_path(out))
        }
    }
}

fn main() -> ExitCode {
    let cli = CliArgs::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        // a verify criterion failed
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::Parameter(_)
                | Error::Domain(_)
                | Error::Index(_)
                | Error::Unsupported(_) => 2,
                Error::NoConvergence { .. }
                | Error::Numerical(_)
                | Error::Io(_)
                | Error::Json(_) => 3,
            };
            ExitCode::from(code)
        }
    }
}
