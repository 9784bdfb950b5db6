//! Batch front-end plumbing: the five commands (`sample`, `spectrum`,
//! `density`, `clt`, `verify`), their file formats and the run manifest.
//!
//! Every command is a pure function of its flags and seed, except for the
//! manifest timestamp, which is explicitly outside the reproducibility
//! contract. Files are written to a temporary sibling and renamed on
//! success, so no command leaves a partial output behind. CSV numbers use
//! Rust's shortest round-trip formatting.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use serde::Serialize;

use crate::ensembles::EnsembleConfig;
use crate::error::{Error, Result};
use crate::jacobi::JacobiMatrix;
use crate::limit_laws::{stieltjes_inversion, LimitLaw};
use crate::spectral::spectral_measure;
use crate::stats::{clt_experiment, CltReport, ExperimentConfig};
use crate::verify::{run_suite, Suite, SuiteReport};

/// Environment variable consulted for the default worker count.
pub const WORKERS_ENV: &str = "JSPEC_WORKERS";

/// Echo of what produced an output file.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub seed: u64,
    pub artifact_version: String,
    /// ISO-8601 UTC; excluded from the reproducibility contract.
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, config: &impl Serialize, seed: u64) -> Result<Self> {
        Ok(RunManifest {
            command: command.to_string(),
            config: serde_json::to_value(config)?,
            seed,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: iso8601_utc_now(),
        })
    }
}

// Howard Hinnant's civil-from-days conversion.
fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let day = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let month = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    let year = yoe + era * 400 + i64::from(month <= 2);
    (year, month, day)
}

fn iso8601_utc_now() -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .unwrap_or_default()
        .as_secs();
    let (year, month, day) = civil_from_days((secs / 86_400) as i64);
    let rem = secs % 86_400;
    format!(
        "{year:04}-{month:02}-{day:02}T{:02}:{:02}:{:02}Z",
        rem / 3600,
        (rem / 60) % 60,
        rem % 60
    )
}

/// Where command output goes.
#[derive(Clone, Debug)]
pub enum Output {
    Stdout,
    File(PathBuf),
}

impl Output {
    pub fn from_path(path: Option<PathBuf>) -> Self {
        match path {
            Some(p) => Output::File(p),
            None => Output::Stdout,
        }
    }

    fn write(&self, contents: &[u8]) -> Result<()> {
        match self {
            Output::Stdout => {
                std::io::stdout().write_all(contents)?;
                Ok(())
            }
            Output::File(path) => write_atomic(path, contents),
        }
    }
}

/// Write-to-temp, rename-on-success; the target never holds partial data.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let result = (|| -> Result<()> {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(contents)?;
        file.sync_all()?;
        Ok(())
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(e);
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn manifest_comment(manifest: &RunManifest) -> Result<String> {
    Ok(format!(
        "# manifest: {}\n",
        serde_json::to_string(manifest)?
    ))
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

/// Renders a Jacobi matrix as CSV: `index,diag,offdiag`, 1-based index, the
/// final row's offdiag column empty.
pub fn matrix_to_csv(j: &JacobiMatrix) -> String {
    let mut out = String::from("index,diag,offdiag\n");
    for (i, &a) in j.diag().iter().enumerate() {
        if let Some(&b) = j.offdiag().get(i) {
            out.push_str(&format!("{},{},{}\n", i + 1, a, b));
        } else {
            out.push_str(&format!("{},{},\n", i + 1, a));
        }
    }
    out
}

/// Parses the `matrix_to_csv` format, ignoring `#` comments and the header.
pub fn matrix_from_csv(text: &str) -> Result<JacobiMatrix> {
    let mut diag = Vec::new();
    let mut offdiag = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("index") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 2 {
            return Err(Error::parameter(format!("malformed matrix row: {line:?}")));
        }
        let a: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|_| Error::parameter(format!("bad diag value {:?}", fields[1])))?;
        diag.push(a);
        if let Some(raw) = fields.get(2) {
            let raw = raw.trim();
            if !raw.is_empty() {
                let b: f64 = raw
                    .parse()
                    .map_err(|_| Error::parameter(format!("bad offdiag value {raw:?}")))?;
                offdiag.push(b);
            }
        }
    }
    JacobiMatrix::new(diag, offdiag)
}

/// `sample`: draw one matrix from the ensemble at the seed and emit CSV.
pub fn cmd_sample(ensemble: &EnsembleConfig, seed: u64, out: &Output) -> Result<()> {
    let mut stream = crate::distributions::RngStream::new(seed);
    let j = ensemble.sample(&mut stream)?;
    let manifest = RunManifest::new("sample", ensemble, seed)?;
    let mut body = manifest_comment(&manifest)?;
    body.push_str(&matrix_to_csv(&j));
    out.write(body.as_bytes())
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

/// Input for `spectrum`: a matrix file or an inline ensemble draw.
#[derive(Clone, Debug)]
pub enum SpectrumSource {
    MatrixFile(PathBuf),
    Ensemble { config: EnsembleConfig, seed: u64 },
}

/// `spectrum`: eigenvalues and weights as CSV `lambda,weight`, sorted. The
/// weight sum is asserted within 1e-10 of 1 before anything is written.
pub fn cmd_spectrum(source: &SpectrumSource, out: &Output) -> Result<()> {
    let (j, manifest) = match source {
        SpectrumSource::MatrixFile(path) => {
            let text = fs::read_to_string(path)?;
            let j = matrix_from_csv(&text)?;
            let config = serde_json::json!({ "matrix_file": path.display().to_string() });
            (j, RunManifest::new("spectrum", &config, 0)?)
        }
        SpectrumSource::Ensemble { config, seed } => {
            let mut stream = crate::distributions::RngStream::new(*seed);
            let j = config.sample(&mut stream)?;
            (j, RunManifest::new("spectrum", config, *seed)?)
        }
    };
    let mu = spectral_measure(&j)?;
    let weight_sum: f64 = mu.atoms().iter().map(|&(_, w)| w).sum();
    if (weight_sum - 1.0).abs() > 1e-10 {
        return Err(Error::Numerical(format!(
            "spectral weights sum to {weight_sum}, outside the 1e-10 assertion"
        )));
    }
    let mut body = manifest_comment(&manifest)?;
    body.push_str("lambda,weight\n");
    for &(l, w) in mu.atoms() {
        body.push_str(&format!("{l},{w}\n"));
    }
    out.write(body.as_bytes())
}

// ---------------------------------------------------------------------------
// density
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct DensityArgs {
    pub law: LimitLaw,
    pub grid: usize,
    /// When set, adds a Stieltjes-inversion estimate column using this
    /// epsilon schedule.
    pub inversion_schedule: Option<Vec<f64>>,
}

/// `density`: CSV `x,density[,inversion_estimate]` over an evenly spaced
/// grid spanning the support plus a 5% margin on each side.
pub fn cmd_density(args: &DensityArgs, out: &Output) -> Result<()> {
    if args.grid < 2 {
        return Err(Error::parameter("density grid needs at least 2 points"));
    }
    let (lo, hi) = args.law.edges();
    let margin = 0.05 * (hi - lo);
    let (left, right) = (lo - margin, hi + margin);
    let step = (right - left) / (args.grid - 1) as f64;

    let manifest = RunManifest::new("density", args, 0)?;
    let mut body = manifest_comment(&manifest)?;
    if args.inversion_schedule.is_some() {
        body.push_str("x,density,inversion_estimate\n");
    } else {
        body.push_str("x,density\n");
    }
    for i in 0..args.grid {
        let x = left + step * i as f64;
        let rho = args.law.density(x);
        match &args.inversion_schedule {
            Some(schedule) => {
                let est = stieltjes_inversion(
                    |z: Complex64| args.law.stieltjes(z).unwrap(),
                    x,
                    schedule,
                )?;
                body.push_str(&format!("{x},{rho},{est}\n"));
            }
            None => body.push_str(&format!("{x},{rho}\n")),
        }
    }
    out.write(body.as_bytes())
}

// ---------------------------------------------------------------------------
// clt
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CltOutput<'a> {
    manifest: &'a RunManifest,
    report: &'a CltReport,
}

/// `clt`: runs the experiment (inside a worker pool when a count is given)
/// and emits the JSON report with its manifest.
pub fn cmd_clt(cfg: &ExperimentConfig, workers: Option<usize>, out: &Output) -> Result<()> {
    let report = run_clt_with_workers(cfg, workers)?;
    let manifest = RunManifest::new("clt", cfg, cfg.seed)?;
    let output = CltOutput {
        manifest: &manifest,
        report: &report,
    };
    let mut body = serde_json::to_vec_pretty(&output)?;
    body.push(b'\n');
    out.write(&body)
}

/// The experiment under an explicit worker count; `None` uses the
/// `JSPEC_WORKERS` variable if present, else the rayon default. The report
/// is byte-identical across worker counts.
pub fn run_clt_with_workers(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<CltReport> {
    let workers = workers.or_else(|| {
        std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
    });
    match workers {
        None => clt_experiment(cfg),
        Some(count) => {
            if count == 0 {
                return Err(Error::parameter("worker count must be >= 1"));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(count)
                .build()
                .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
            pool.install(|| clt_experiment(cfg))
        }
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct VerifyOutput<'a> {
    manifest: &'a RunManifest,
    report: &'a SuiteReport,
}

/// `verify`: runs the acceptance suite, prints one pass/fail line per
/// criterion to stderr, emits the JSON report, and returns whether all
/// criteria passed.
pub fn cmd_verify(suite: Suite, seed: u64, out: &Output) -> Result<bool> {
    let report = run_suite(suite, seed)?;
    for criterion in &report.criteria {
        let status = if criterion.passed { "PASS" } else { "FAIL" };
        eprintln!(
            "{status} [{:>2}] {} ({:.2} s)",
            criterion.id, criterion.name, criterion.runtime_seconds
        );
        if !criterion.passed {
            for check in criterion.checks.iter().filter(|c| !c.passed) {
                eprintln!(
                    "      {}: value {} exceeds bound {}",
                    check.label, check.value, check.bound
                );
            }
        }
    }
    let config = serde_json::json!({ "suite": report.suite, "seed": seed });
    let manifest = RunManifest::new("verify", &config, seed)?;
    let output = VerifyOutput {
        manifest: &manifest,
        report: &report,
    };
    let mut body = serde_json::to_vec_pretty(&output)?;
    body.push(b'\n');
    out.write(&body)?;
    Ok(report.passed)
}
