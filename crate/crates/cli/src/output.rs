use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use nlmi::analytic::SensitivityReport;
use nlmi::sweep::SweepRow;

/// Provenance written next to every output file.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub timestamp_unix: u64,
    pub command_line: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &'static str, parameters: Value, seed: Option<u64>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            parameters,
            seed,
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            command_line: std::env::args().collect(),
        }
    }
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes `body` to `output` (with its manifest) or to stdout.
pub fn emit(output: Option<&Path>, body: &str, manifest: RunManifest) -> Result<()> {
    match output {
        Some(path) => {
            fs::write(path, body).with_context(|| format!("cannot write {}", path.display()))?;
            let sidecar = manifest_path(path);
            let text = serde_json::to_string_pretty(&manifest)? + "\n";
            fs::write(&sidecar, text).with_context(|| format!("cannot write {}", sidecar.display()))?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(body.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

#[derive(Debug, Serialize)]
pub struct ValidityJson {
    pub margin_small_signal: f64,
    pub margin_thermal: f64,
    pub margin_dephasing: f64,
    pub margin_operating_point: f64,
    pub margin_nl_dominant: f64,
    pub small_signal: bool,
    pub weak_thermal: bool,
    pub weak_dephasing: bool,
    pub on_operating_point: bool,
    pub nonlinearity_dominant: bool,
}

/// `estimate` output. Shared fields are copied from the sweep row so that a
/// one-point sweep agrees bit for bit.
#[derive(Debug, Serialize)]
pub struct EstimateJson {
    pub n_photons: f64,
    pub chi: f64,
    pub k: f64,
    pub delta_x_m: f64,
    pub delta_x_linear_m: f64,
    pub improvement: f64,
    pub var_m: f64,
    pub dmdx_per_m: f64,
    pub arm_length_m: f64,
    pub signal_x_m: f64,
    pub validity: ValidityJson,
}

impl EstimateJson {
    pub fn new(row: &SweepRow, report: &SensitivityReport) -> Self {
        Self {
            n_photons: row.n_photons,
            chi: row.chi,
            k: row.k_per_m,
            delta_x_m: row.delta_x_m,
            delta_x_linear_m: row.delta_x_linear_m,
            improvement: row.improvement,
            var_m: report.var_m,
            dmdx_per_m: report.dmdx,
            arm_length_m: row.arm_length_m,
            signal_x_m: row.signal_x_m,
            validity: ValidityJson {
                margin_small_signal: row.margin_small_signal,
                margin_thermal: row.margin_thermal,
                margin_dephasing: row.margin_dephasing,
                margin_operating_point: row.margin_operating_point,
                margin_nl_dominant: row.margin_nl_dominant,
                small_signal: row.small_signal,
                weak_thermal: row.weak_thermal,
                weak_dephasing: row.weak_dephasing,
                on_operating_point: row.on_operating_point,
                nonlinearity_dominant: row.nonlinearity_dominant,
            },
        }
    }
}
