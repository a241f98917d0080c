use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use nlmi::analytic::ValidityThresholds;
use nlmi::params::{
    parse_kerr_coefficient, ArmLength, MediumSpec, NoiseSpec, Preset, PulseSpec, Scenario,
};
use nlmi::sweep::DEFAULT_ROW_CAP;
use nlmi::verify::{DEFAULT_MC_SAMPLES, DEFAULT_SEED, DEFAULT_TOLERANCE};

#[derive(Debug, Parser)]
#[command(
    name = "nlmi",
    version,
    about = "Sensitivity of a Kerr-nonlinear Michelson interferometer probed by classical pulses"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result to this file (plus a `<file>.manifest.json` sidecar)
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Output format (defaults: estimate/regimes json, sweep csv, verify text)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Margin ratio below which a "much less than" condition counts as met
    #[arg(long, global = true, default_value_t = ValidityThresholds::DEFAULT_MARGIN)]
    pub threshold: f64,

    /// Seed for Monte Carlo phase averaging
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sensitivity report for one configuration
    Estimate(PhysicalArgs),
    /// Evaluate the sensitivity over a parameter grid
    Sweep(SweepArgs),
    /// Check the closed forms against the Fock-space simulation
    Verify(VerifyArgs),
    /// List the built-in regimes with their operating points and bounds
    Regimes(RegimesArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PhysicalArgs {
    /// Start from a built-in preset (natural | giant-eit); other flags override it
    #[arg(long)]
    pub regime: Option<String>,
    /// Vacuum wavelength, m
    #[arg(long)]
    pub wavelength: Option<f64>,
    /// Pulse duration, s
    #[arg(long)]
    pub tau: Option<f64>,
    /// Beam cross section, m²
    #[arg(long)]
    pub area: Option<f64>,
    /// Pulse power, W
    #[arg(long)]
    pub power: Option<f64>,
    /// Kerr coefficient; cm²/W unless suffixed with `m2/W`
    #[arg(long, allow_hyphen_values = true)]
    pub n2: Option<String>,
    /// Linear refractive index
    #[arg(long)]
    pub n0: Option<f64>,
    /// Detector efficiency in (0, 1]
    #[arg(long)]
    pub eta: Option<f64>,
    /// Standard deviation of the random relative phase, rad
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Mean number of stray thermal photons
    #[arg(long)]
    pub nt: Option<f64>,
    /// Rest arm length, m (default: the z0 = mπ operating point)
    #[arg(long)]
    pub arm_length: Option<f64>,
    /// Anti-correlated signal x, m
    #[arg(long, allow_hyphen_values = true)]
    pub signal: Option<f64>,
    /// Operating-point integer used when --arm-length is not given
    #[arg(long, default_value_t = 1)]
    pub m: i64,
}

impl PhysicalArgs {
    pub fn scenario(&self) -> Result<Scenario> {
        let mut scenario = match &self.regime {
            Some(name) => name.parse::<Preset>()?.scenario(),
            None => {
                let missing: Vec<&str> = [
                    ("--wavelength", self.wavelength.is_none()),
                    ("--tau", self.tau.is_none()),
                    ("--area", self.area.is_none()),
                    ("--power", self.power.is_none()),
                    ("--n2", self.n2.is_none()),
                ]
                .into_iter()
                .filter_map(|(flag, absent)| absent.then_some(flag))
                .collect();
                if !missing.is_empty() {
                    bail!("missing {} (or pass --regime)", missing.join(", "));
                }
                Scenario {
                    pulse: PulseSpec {
                        wavelength: self.wavelength.unwrap_or_default(),
                        duration: self.tau.unwrap_or_default(),
                        cross_section: self.area.unwrap_or_default(),
                        power: self.power.unwrap_or_default(),
                    },
                    medium: MediumSpec {
                        linear_index: 1.0,
                        kerr_coefficient: 0.0,
                    },
                    noise: NoiseSpec::IDEAL,
                    arm: ArmLength::OperatingPoint(self.m),
                    signal_x: 0.0,
                }
            }
        };
        if let Some(v) = self.wavelength {
            scenario.pulse.wavelength = v;
        }
        if let Some(v) = self.tau {
            scenario.pulse.duration = v;
        }
        if let Some(v) = self.area {
            scenario.pulse.cross_section = v;
        }
        if let Some(v) = self.power {
            scenario.pulse.power = v;
        }
        if let Some(text) = &self.n2 {
            scenario.medium.kerr_coefficient = parse_kerr_coefficient(text)?;
        }
        if let Some(v) = self.n0 {
            scenario.medium.linear_index = v;
        }
        if let Some(v) = self.eta {
            scenario.noise.efficiency = v;
        }
        if let Some(v) = self.sigma {
            scenario.noise.phase_sigma = v;
        }
        if let Some(v) = self.nt {
            scenario.noise.thermal_photons = v;
        }
        if let Some(v) = self.signal {
            scenario.signal_x = v;
        }
        scenario.arm = match self.arm_length {
            Some(length) => ArmLength::Fixed(length),
            None => ArmLength::OperatingPoint(self.m),
        };
        scenario.validate().context("invalid physical parameters")?;
        Ok(scenario)
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub physical: PhysicalArgs,
    /// Grid axis `name=lo:hi:points[:linear|log]`; repeat for up to 3 axes
    #[arg(long = "grid")]
    pub grids: Vec<String>,
    /// Co-vary the power so every row keeps the base photon number
    #[arg(long)]
    pub hold_photons: bool,
    /// Maximum number of rows
    #[arg(long, default_value_t = DEFAULT_ROW_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest photon number in the test grid (perfect squares up to this)
    #[arg(long, default_value_t = 25)]
    pub max_photons: u32,
    /// Additive margin of the per-mode Fock dimension µ + 10√µ + margin
    #[arg(long, default_value_t = nlmi::oracle::DEFAULT_DIM_MARGIN)]
    pub dim_margin: f64,
    /// Largest accepted relative error
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// Comma-separated case families: mean,displacement,variance,gaussian,noise
    #[arg(long, value_delimiter = ',')]
    pub cases: Vec<String>,
    /// Monte Carlo samples per Gaussian-averaging case
    #[arg(long, default_value_t = DEFAULT_MC_SAMPLES)]
    pub samples: usize,
    /// Print every case, not only the per-family summary
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, Args)]
pub struct RegimesArgs {
    /// Operating-point integer
    #[arg(long, default_value_t = 1)]
    pub m: i64,
}
