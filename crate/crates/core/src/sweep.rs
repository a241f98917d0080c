//! Exhaustive parameter grids over the closed-form sensitivity.
//!
//! Rows come out in lexicographic order of the grid indices (first axis
//! slowest) whether or not they were evaluated in parallel.

use std::fmt;
use std::io;
use std::str::FromStr;

use serde::Serialize;

use crate::analytic::{conjectured_scaling, sensitivity, ValidityThresholds};
use crate::error::{Error, Result};
use crate::params::{
    derive, kerr_phases, parse_kerr_coefficient, ArmLength, GeometrySpec, Preset, Scenario,
};

pub const DEFAULT_ROW_CAP: usize = 1_000_000;
pub const MAX_AXES: usize = 3;
/// Operating-point arm lengths above this are reported as impractical.
pub const PRACTICAL_ARM_LENGTH: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridParameter {
    Tau,
    Area,
    Power,
    N2,
    Wavelength,
    Eta,
    Sigma,
    Nt,
    ArmLength,
    SignalX,
}

impl GridParameter {
    pub const ALL: [GridParameter; 10] = [
        GridParameter::Tau,
        GridParameter::Area,
        GridParameter::Power,
        GridParameter::N2,
        GridParameter::Wavelength,
        GridParameter::Eta,
        GridParameter::Sigma,
        GridParameter::Nt,
        GridParameter::ArmLength,
        GridParameter::SignalX,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GridParameter::Tau => "tau",
            GridParameter::Area => "area",
            GridParameter::Power => "power",
            GridParameter::N2 => "n2",
            GridParameter::Wavelength => "wavelength",
            GridParameter::Eta => "eta",
            GridParameter::Sigma => "sigma",
            GridParameter::Nt => "nt",
            GridParameter::ArmLength => "arm_length",
            GridParameter::SignalX => "signal_x",
        }
    }

    fn apply(self, scenario: &mut Scenario, value: f64) {
        match self {
            GridParameter::Tau => scenario.pulse.duration = value,
            GridParameter::Area => scenario.pulse.cross_section = value,
            GridParameter::Power => scenario.pulse.power = value,
            GridParameter::N2 => scenario.medium.kerr_coefficient = value,
            GridParameter::Wavelength => scenario.pulse.wavelength = value,
            GridParameter::Eta => scenario.noise.efficiency = value,
            GridParameter::Sigma => scenario.noise.phase_sigma = value,
            GridParameter::Nt => scenario.noise.thermal_photons = value,
            GridParameter::ArmLength => scenario.arm = ArmLength::Fixed(value),
            GridParameter::SignalX => scenario.signal_x = value,
        }
    }
}

impl fmt::Display for GridParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GridParameter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        GridParameter::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .ok_or_else(|| format!("unknown parameter `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// One sweep axis, e.g. `tau=1e-13:1e-10:50:log`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub parameter: GridParameter,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn new(parameter: GridParameter, lo: f64, hi: f64, points: usize, spacing: Spacing) -> Result<Self> {
        let grid = Self {
            parameter,
            lo,
            hi,
            points,
            spacing,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// A one-point axis pinned at `value`.
    pub fn point(parameter: GridParameter, value: f64) -> Self {
        Self {
            parameter,
            lo: value,
            hi: value,
            points: 1,
            spacing: Spacing::Linear,
        }
    }

    fn fail(&self, reason: impl Into<String>) -> Error {
        Error::InvalidGrid {
            spec: format!("{}={}:{}:{}", self.parameter, self.lo, self.hi, self.points),
            reason: reason.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) {
            return Err(self.fail("bounds must be finite"));
        }
        if self.points == 1 && self.lo == self.hi {
            return Ok(());
        }
        if self.points < 2 {
            return Err(self.fail("need at least 2 points"));
        }
        if self.lo >= self.hi {
            return Err(self.fail("lower bound must be below upper bound"));
        }
        if self.spacing == Spacing::Log && self.lo <= 0.0 {
            return Err(self.fail("log spacing needs a positive lower bound"));
        }
        Ok(())
    }

    /// Grid values; the endpoints are exactly `lo` and `hi`.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.lo];
        }
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.lo;
                }
                if i == last {
                    return self.hi;
                }
                let t = i as f64 / last as f64;
                match self.spacing {
                    Spacing::Linear => self.lo + (self.hi - self.lo) * t,
                    Spacing::Log => (self.lo.ln() + (self.hi.ln() - self.lo.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidGrid {
            spec: text.to_string(),
            reason: reason.to_string(),
        };
        let (name, range) = text
            .split_once('=')
            .ok_or_else(|| bad("expected name=lo:hi:points[:linear|log]"))?;
        let parameter: GridParameter = name.parse().map_err(|e: String| bad(&e))?;
        let parts: Vec<&str> = range.split(':').map(str::trim).collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad("expected name=lo:hi:points[:linear|log]"));
        }
        let bound = |s: &str| -> Result<f64> {
            if parameter == GridParameter::N2 {
                parse_kerr_coefficient(s).map_err(|_| bad("unparseable bound"))
            } else {
                s.parse::<f64>().map_err(|_| bad("unparseable bound"))
            }
        };
        let lo = bound(parts[0])?;
        let hi = bound(parts[1])?;
        let points: usize = parts[2].parse().map_err(|_| bad("unparseable point count"))?;
        let spacing = match parts.get(3).map(|s| s.to_ascii_lowercase()) {
            None => Spacing::Linear,
            Some(s) if s == "linear" || s == "lin" => Spacing::Linear,
            Some(s) if s == "log" => Spacing::Log,
            Some(_) => return Err(bad("spacing must be `linear` or `log`")),
        };
        let grid = GridSpec {
            parameter,
            lo,
            hi,
            points,
            spacing,
        };
        grid.validate().map_err(|e| match e {
            Error::InvalidGrid { reason, .. } => bad(&reason),
            other => other,
        })?;
        Ok(grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub cap: usize,
    /// Co-vary the power so the photon number stays at the base value.
    pub hold_photons: bool,
    pub thresholds: ValidityThresholds,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ROW_CAP,
            hold_photons: false,
            thresholds: ValidityThresholds::default(),
        }
    }
}

/// Inputs and outputs of one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub tau_s: f64,
    pub area_m2: f64,
    pub power_w: f64,
    pub n2_m2_per_w: f64,
    pub wavelength_m: f64,
    pub n0: f64,
    pub eta: f64,
    pub sigma: f64,
    pub nt: f64,
    pub arm_length_m: f64,
    pub signal_x_m: f64,
    pub n_photons: f64,
    pub chi: f64,
    pub k_per_m: f64,
    pub delta_x_m: f64,
    pub delta_x_linear_m: f64,
    pub improvement: f64,
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

pub const CSV_COLUMNS: [&str; 19] = [
    "tau_s",
    "area_m2",
    "power_w",
    "n2_m2_per_w",
    "wavelength_m",
    "eta",
    "sigma",
    "nt",
    "n_photons",
    "chi",
    "k_per_m",
    "delta_x_m",
    "delta_x_linear_m",
    "improvement",
    "margin_small_signal",
    "margin_thermal",
    "margin_dephasing",
    "margin_operating_point",
    "margin_nl_dominant",
];

impl SweepRow {
    /// The scenario this row was evaluated from.
    pub fn scenario(&self) -> Scenario {
        Scenario {
            pulse: crate::params::PulseSpec {
                wavelength: self.wavelength_m,
                duration: self.tau_s,
                cross_section: self.area_m2,
                power: self.power_w,
            },
            medium: crate::params::MediumSpec {
                linear_index: self.n0,
                kerr_coefficient: self.n2_m2_per_w,
            },
            noise: crate::params::NoiseSpec {
                efficiency: self.eta,
                phase_sigma: self.sigma,
                thermal_photons: self.nt,
            },
            arm: ArmLength::Fixed(self.arm_length_m),
            signal_x: self.signal_x_m,
        }
    }

    pub fn csv_values(&self) -> [f64; 19] {
        [
            self.tau_s,
            self.area_m2,
            self.power_w,
            self.n2_m2_per_w,
            self.wavelength_m,
            self.eta,
            self.sigma,
            self.nt,
            self.n_photons,
            self.chi,
            self.k_per_m,
            self.delta_x_m,
            self.delta_x_linear_m,
            self.improvement,
            self.margin_small_signal,
            self.margin_thermal,
            self.margin_dephasing,
            self.margin_operating_point,
            self.margin_nl_dominant,
        ]
    }

    /// Shortest round-trip scientific notation, comma separated.
    pub fn csv_record(&self) -> String {
        self.csv_values()
            .iter()
            .map(|v| format!("{v:e}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub fn write_csv<W: io::Write>(mut out: W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(out, "{}", CSV_COLUMNS.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.csv_record())?;
    }
    Ok(())
}

/// Evaluates one fully specified scenario.
pub fn evaluate_point(scenario: &Scenario, thresholds: &ValidityThresholds) -> Result<SweepRow> {
    let (derived, geometry) = scenario.resolve()?;
    let noise = scenario.noise;
    let report = sensitivity(&derived, &geometry, &noise, thresholds);
    let v = report.validity;
    Ok(SweepRow {
        tau_s: scenario.pulse.duration,
        area_m2: scenario.pulse.cross_section,
        power_w: scenario.pulse.power,
        n2_m2_per_w: scenario.medium.kerr_coefficient,
        wavelength_m: scenario.pulse.wavelength,
        n0: scenario.medium.linear_index,
        eta: noise.efficiency,
        sigma: noise.phase_sigma,
        nt: noise.thermal_photons,
        arm_length_m: geometry.arm_length,
        signal_x_m: geometry.signal_x,
        n_photons: derived.photons,
        chi: derived.chi,
        k_per_m: derived.wavenumber,
        delta_x_m: report.delta_x,
        delta_x_linear_m: report.delta_x_linear,
        improvement: report.improvement,
        margin_small_signal: v.small_signal.ratio,
        margin_thermal: v.weak_thermal.ratio,
        margin_dephasing: v.weak_dephasing.ratio,
        margin_operating_point: v.on_operating_point.ratio,
        margin_nl_dominant: v.nonlinearity_dominant.ratio,
        small_signal: v.small_signal.satisfied,
        weak_thermal: v.weak_thermal.satisfied,
        weak_dephasing: v.weak_dephasing.satisfied,
        on_operating_point: v.on_operating_point.satisfied,
        nonlinearity_dominant: v.nonlinearity_dominant.satisfied,
    })
}

/// Evaluates the Cartesian product of `grids` around `base`.
pub fn run_sweep(base: &Scenario, grids: &[GridSpec], options: &SweepOptions) -> Result<Vec<SweepRow>> {
    if grids.len() > MAX_AXES {
        return Err(Error::InvalidGrid {
            spec: format!("{} axes", grids.len()),
            reason: format!("at most {MAX_AXES} simultaneous axes"),
        });
    }
    for (i, g) in grids.iter().enumerate() {
        g.validate()?;
        if grids[..i].iter().any(|h| h.parameter == g.parameter) {
            return Err(Error::InvalidGrid {
                spec: g.parameter.to_string(),
                reason: "parameter swept twice".into(),
            });
        }
        if options.hold_photons && g.parameter == GridParameter::Power {
            return Err(Error::InvalidGrid {
                spec: g.parameter.to_string(),
                reason: "power cannot be swept while holding the photon number".into(),
            });
        }
    }
    let total = grids
        .iter()
        .try_fold(1usize, |acc, g| acc.checked_mul(g.points))
        .filter(|&n| n <= options.cap)
        .ok_or_else(|| Error::CapExceeded {
            requested: grids
                .iter()
                .fold(1usize, |acc, g| acc.saturating_mul(g.points)),
            cap: options.cap,
        })?;

    base.validate()?;
    let base_photons = derive(&base.pulse, &base.medium)?.photons;
    let axes: Vec<(GridParameter, Vec<f64>)> = grids.iter().map(|g| (g.parameter, g.values())).collect();

    let point = |index: usize| -> Result<SweepRow> {
        let mut scenario = *base;
        let mut rest = index;
        for (parameter, values) in axes.iter().rev() {
            parameter.apply(&mut scenario, values[rest % values.len()]);
            rest /= values.len();
        }
        if options.hold_photons {
            scenario.pulse.power = scenario.pulse.power_for_photons(base_photons);
        }
        evaluate_point(&scenario, &options.thresholds)
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..total).into_par_iter().map(point).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..total).map(point).collect()
    }
}

/// Detectable signal range: from the resolution up to the small-signal bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignalWindow {
    /// `Δx`
    pub x_min_m: f64,
    /// `1/(χNk)`, where `χNkx` reaches one.
    pub x_max_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub preset: String,
    pub m: i64,
    /// Smallest rest arm length with `z0 = mπ`.
    pub arm_length_m: f64,
    pub z0: f64,
    pub row: SweepRow,
    pub signal_window: SignalWindow,
    /// `χ√(N/η)`: dephasing must stay well below this.
    pub sigma_max: f64,
    /// `χ²N²`: thermal photons must stay well below this.
    pub nt_max: f64,
    /// `τAλ²/N²`, meaningful only relative to other configurations.
    pub conjectured_scaling: f64,
    pub notes: Vec<String>,
}

/// Operating point, signal window and imperfection bounds of `scenario`.
pub fn operating_report(
    label: &str,
    scenario: &Scenario,
    m: i64,
    thresholds: ValidityThresholds,
) -> Result<RegimeReport> {
    let mut at_operating_point = *scenario;
    at_operating_point.arm = ArmLength::OperatingPoint(m);
    let row = evaluate_point(&at_operating_point, &thresholds)?;
    let (derived, geometry) = at_operating_point.resolve()?;
    let phases = kerr_phases(&derived, &GeometrySpec::new(geometry.arm_length, 0.0)?);
    let (n, chi, k) = (derived.photons, derived.chi, derived.wavenumber);
    let eta = scenario.noise.efficiency;

    let mut notes = Vec::new();
    if chi == 0.0 {
        notes.push("linear medium: every arm length is an operating point".to_string());
    } else if row.arm_length_m > PRACTICAL_ARM_LENGTH {
        notes.push(format!(
            "operating point requires an impractically long interferometer ({:.1e} m for m = {m}); \
             the m = 0 route with a compensating opposite-sign Kerr stage is not modeled",
            row.arm_length_m
        ));
    }
    if chi * n <= 1.0 {
        notes.push("chi*N <= 1: the nonlinearity gives no appreciable improvement".to_string());
    }

    Ok(RegimeReport {
        preset: label.to_string(),
        m,
        arm_length_m: row.arm_length_m,
        z0: phases.z0,
        signal_window: SignalWindow {
            x_min_m: row.delta_x_m,
            x_max_m: if chi * n * k > 0.0 { 1.0 / (chi * n * k) } else { f64::INFINITY },
        },
        sigma_max: chi * (n / eta).sqrt(),
        nt_max: chi * chi * n * n,
        conjectured_scaling: conjectured_scaling(
            scenario.pulse.duration,
            scenario.pulse.cross_section,
            scenario.pulse.wavelength,
            n,
        ),
        row,
        notes,
    })
}

pub fn regime_report(preset: Preset, m: i64, thresholds: ValidityThresholds) -> Result<RegimeReport> {
    operating_report(preset.name(), &preset.scenario(), m, thresholds)
}

pub fn regime_report_by_name(name: &str, m: i64, thresholds: ValidityThresholds) -> Result<RegimeReport> {
    regime_report(name.parse()?, m, thresholds)
}
