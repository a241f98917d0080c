//! `nlmi` command-line front end.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure.

mod args;
mod output;

use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use serde_json::json;

use nlmi::analytic::{sensitivity, ValidityThresholds};
use nlmi::params::Preset;
use nlmi::sweep::{evaluate_point, regime_report, run_sweep, write_csv, GridSpec, RegimeReport, SweepOptions};
use nlmi::verify::{run_verify, Family, VerifyConfig, VerifyReport};

use crate::args::{Cli, Command, Format, PhysicalArgs, RegimesArgs, SweepArgs, VerifyArgs};
use crate::output::{emit, to_json, EstimateJson, RunManifest};

const EXIT_INPUT: u8 = 1;
const EXIT_VERIFY: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{first}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn thresholds(cli: &Cli) -> Result<ValidityThresholds> {
    if !(cli.threshold.is_finite() && cli.threshold > 0.0) {
        bail!("--threshold must be finite and > 0, got {}", cli.threshold);
    }
    Ok(ValidityThresholds::uniform(cli.threshold))
}

/// Returns `Ok(false)` only when verification ran and failed.
fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Estimate(args) => estimate(cli, args).map(|_| true),
        Command::Sweep(args) => sweep(cli, args).map(|_| true),
        Command::Verify(args) => verify(cli, args),
        Command::Regimes(args) => regimes(cli, args).map(|_| true),
    }
}

fn csv_of(rows: &[nlmi::sweep::SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    Ok(String::from_utf8(buf)?)
}

fn estimate(cli: &Cli, args: &PhysicalArgs) -> Result<()> {
    let thresholds = thresholds(cli)?;
    let scenario = args.scenario()?;
    let row = evaluate_point(&scenario, &thresholds)?;
    let (derived, geometry) = row.scenario().resolve()?;
    let report = sensitivity(&derived, &geometry, &scenario.noise, &thresholds);
    let body = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&EstimateJson::new(&row, &report))?,
        Format::Csv => csv_of(&[row])?,
    };
    let manifest = RunManifest::new("estimate", json!({ "row": row, "thresholds": thresholds }), None);
    emit(cli.output.as_deref(), &body, manifest)
}

fn sweep(cli: &Cli, args: &SweepArgs) -> Result<()> {
    let thresholds = thresholds(cli)?;
    let base = args.physical.scenario()?;
    let grids = args
        .grids
        .iter()
        .map(|g| g.parse::<GridSpec>())
        .collect::<Result<Vec<_>, _>>()?;
    let options = SweepOptions {
        cap: args.cap,
        hold_photons: args.hold_photons,
        thresholds,
    };
    let rows = run_sweep(&base, &grids, &options)?;
    let body = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_of(&rows)?,
        Format::Json => to_json(&rows)?,
    };
    let manifest = RunManifest::new(
        "sweep",
        json!({
            "base": base,
            "grids": args.grids,
            "hold_photons": args.hold_photons,
            "cap": args.cap,
            "thresholds": thresholds,
        }),
        None,
    );
    emit(cli.output.as_deref(), &body, manifest)
}

fn verify_text(report: &VerifyReport, verbose: bool) -> String {
    let c = &report.config;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "verify: max_photons={} dim_margin={} tolerance={:e} seed={} samples={}",
        c.max_photons, c.dim_margin, c.tolerance, c.seed, c.mc_samples
    );
    if verbose {
        for case in &report.cases {
            let _ = writeln!(
                out,
                "  {:<12} {:<40} expected={:<24e} actual={:<24e} err={:.3e} {}",
                case.family.name(),
                case.label,
                case.expected,
                case.actual,
                case.error,
                if case.passed { "ok" } else { "FAIL" }
            );
        }
    }
    let _ = writeln!(out, "{:<13} {:>6}  {:<12} {:<8} status", "family", "cases", "worst", "limit");
    for s in &report.families {
        let metric = if s.family == Family::Gaussian { "z" } else { "rel" };
        let _ = writeln!(
            out,
            "{:<13} {:>6}  {:<12} {:<8} {}",
            s.family.name(),
            s.cases,
            format!("{:.3e}", s.worst_error),
            format!("{}{:e}", if metric == "z" { "z<=" } else { "" }, s.limit),
            if s.passed { "PASS" } else { "FAIL" }
        );
    }
    let _ = writeln!(out, "overall {}", if report.passed { "PASS" } else { "FAIL" });
    out
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Result<bool> {
    let families = if args.cases.is_empty() {
        Family::ALL.to_vec()
    } else {
        args.cases
            .iter()
            .map(|s| s.parse::<Family>())
            .collect::<Result<Vec<_>, _>>()?
    };
    let config = VerifyConfig {
        max_photons: args.max_photons,
        dim_margin: args.dim_margin,
        tolerance: args.tolerance,
        seed: cli.seed,
        mc_samples: args.samples,
        families,
    };
    let report = run_verify(&config)?;
    let body = match cli.format {
        None => verify_text(&report, args.verbose),
        Some(Format::Json) => to_json(&report)?,
        Some(Format::Csv) => {
            let mut out = String::from("family,label,expected,actual,error,limit,passed\n");
            for c in &report.cases {
                let _ = writeln!(
                    out,
                    "{},\"{}\",{:e},{:e},{:e},{:e},{}",
                    c.family.name(),
                    c.label,
                    c.expected,
                    c.actual,
                    c.error,
                    c.limit,
                    c.passed
                );
            }
            out
        }
    };
    let manifest = RunManifest::new("verify", serde_json::to_value(&report.config)?, Some(cli.seed));
    emit(cli.output.as_deref(), &body, manifest)?;
    Ok(report.passed)
}

#[derive(Serialize)]
struct PresetInputs {
    wavelength_m: f64,
    tau_s: f64,
    area_m2: f64,
    power_w: f64,
    n2_cm2_per_w: f64,
    n2_m2_per_w: f64,
    n0: f64,
    eta: f64,
    sigma: f64,
    nt: f64,
}

#[derive(Serialize)]
struct PresetEntry {
    name: &'static str,
    inputs: PresetInputs,
    report: RegimeReport,
}

fn regimes(cli: &Cli, args: &RegimesArgs) -> Result<()> {
    let thresholds = thresholds(cli)?;
    let mut entries = Vec::new();
    for preset in Preset::ALL {
        let regime = preset.regime();
        entries.push(PresetEntry {
            name: preset.name(),
            inputs: PresetInputs {
                wavelength_m: regime.pulse.wavelength,
                tau_s: regime.pulse.duration,
                area_m2: regime.pulse.cross_section,
                power_w: regime.pulse.power,
                n2_cm2_per_w: preset.kerr_cm2_per_w(),
                n2_m2_per_w: regime.medium.kerr_coefficient,
                n0: regime.medium.linear_index,
                eta: regime.noise.efficiency,
                sigma: regime.noise.phase_sigma,
                nt: regime.noise.thermal_photons,
            },
            report: regime_report(preset, args.m, thresholds)?,
        });
    }
    let body = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({ "presets": entries }))?,
        Format::Csv => csv_of(&entries.iter().map(|e| e.report.row).collect::<Vec<_>>())?,
    };
    let manifest = RunManifest::new("regimes", json!({ "m": args.m, "thresholds": thresholds }), None);
    emit(cli.output.as_deref(), &body, manifest)
}
