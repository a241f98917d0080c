//! Physical inputs: pulse, medium, geometry and noise specs, the quantities
//! derived from them, and the two built-in regime presets.
//!
//! Everything is SI internally. The Kerr coefficient is commonly quoted in
//! cm²/W; [`MediumSpec::from_cm2_per_w`] converts on the way in.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const C_LIGHT: f64 = 2.997_924_58e8;
/// 1 cm²/W expressed in m²/W.
pub const CM2_PER_W: f64 = 1e-4;
/// Arm length used when the medium is linear and no length was requested.
/// Any length is an operating point when `χ = 0`.
pub const LINEAR_ARM_LENGTH: f64 = 1.0;

fn require_positive(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite and > 0, got {value}")))
    }
}

fn require_non_negative(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite and >= 0, got {value}")))
    }
}

/// Free parameters of one classical probe pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    /// Vacuum wavelength, m.
    pub wavelength: f64,
    /// Pulse duration, s.
    pub duration: f64,
    /// Beam cross section, m².
    pub cross_section: f64,
    /// Peak power, W.
    pub power: f64,
}

impl PulseSpec {
    pub fn new(wavelength: f64, duration: f64, cross_section: f64, power: f64) -> Result<Self> {
        let pulse = Self {
            wavelength,
            duration,
            cross_section,
            power,
        };
        pulse.validate()?;
        Ok(pulse)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("wavelength", self.wavelength)?;
        require_positive("duration", self.duration)?;
        require_positive("cross_section", self.cross_section)?;
        require_positive("power", self.power)?;
        let omega = self.angular_frequency();
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::invalid(
                "wavelength",
                format!("angular frequency 2πc/λ is not finite and positive ({omega})"),
            ));
        }
        Ok(())
    }

    /// `ω = 2πc/λ`.
    pub fn angular_frequency(&self) -> f64 {
        2.0 * PI * C_LIGHT / self.wavelength
    }

    /// `ħω`, J.
    pub fn photon_energy(&self) -> f64 {
        HBAR * self.angular_frequency()
    }

    /// Power carrying `photons` photons per pulse at this wavelength and duration.
    pub fn power_for_photons(&self, photons: f64) -> f64 {
        photons * self.photon_energy() / self.duration
    }
}

/// Parses a Kerr coefficient with an optional unit suffix and returns m²/W.
///
/// A bare number is read in cm²/W; `cm2/W` and `m2/W` suffixes select the unit.
pub fn parse_kerr_coefficient(text: &str) -> Result<f64> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = compact.to_ascii_lowercase();
    let (number, scale) = if let Some(n) = lower.strip_suffix("cm2/w") {
        (n, CM2_PER_W)
    } else if let Some(n) = lower.strip_suffix("m2/w") {
        (n, 1.0)
    } else {
        (lower.as_str(), CM2_PER_W)
    };
    let value: f64 = number
        .parse()
        .map_err(|_| Error::invalid("n2", format!("cannot parse `{text}`")))?;
    if !value.is_finite() {
        return Err(Error::invalid("n2", format!("not finite: `{text}`")));
    }
    Ok(value * scale)
}

/// Linear index and Kerr coefficient of the medium filling the arms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumSpec {
    pub linear_index: f64,
    /// Kerr coefficient `ñ` in m²/W.
    pub kerr_coefficient: f64,
}

impl MediumSpec {
    pub fn new(linear_index: f64, kerr_coefficient: f64) -> Result<Self> {
        let medium = Self {
            linear_index,
            kerr_coefficient,
        };
        medium.validate()?;
        Ok(medium)
    }

    pub fn from_cm2_per_w(linear_index: f64, kerr_cm2_per_w: f64) -> Result<Self> {
        Self::new(linear_index, kerr_cm2_per_w * CM2_PER_W)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("n0", self.linear_index)?;
        if !self.kerr_coefficient.is_finite() || self.kerr_coefficient < 0.0 {
            return Err(Error::invalid(
                "n2",
                format!(
                    "Kerr coefficient must be finite and >= 0 (negative media unsupported), got {}",
                    self.kerr_coefficient
                ),
            ));
        }
        Ok(())
    }
}

/// Photon budget, intensity, per-photon nonlinear phase and wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerrDerived {
    /// Photons per pulse, `N = Pτ/(ħω)`.
    pub photons: f64,
    /// Intensity `I = P/A`, W/m².
    pub intensity: f64,
    /// Nonlinear phase per photon, `χ = (ñ/n0)·ħω/(Aτ)`.
    pub chi: f64,
    /// `k = n0·ω/c`, 1/m.
    pub wavenumber: f64,
}

pub fn derive(pulse: &PulseSpec, medium: &MediumSpec) -> Result<KerrDerived> {
    pulse.validate()?;
    medium.validate()?;
    let photon_energy = pulse.photon_energy();
    Ok(KerrDerived {
        photons: pulse.power * pulse.duration / photon_energy,
        intensity: pulse.power / pulse.cross_section,
        chi: (medium.kerr_coefficient / medium.linear_index) * photon_energy
            / (pulse.cross_section * pulse.duration),
        wavenumber: medium.linear_index * pulse.angular_frequency() / C_LIGHT,
    })
}

/// Intensity-dependent index `n = n0(1 + χN)`.
///
/// Algebraically identical to `n0 + ñI`; see [`refractive_index_from_intensity`].
pub fn refractive_index(medium: &MediumSpec, derived: &KerrDerived) -> f64 {
    medium.linear_index * (1.0 + derived.chi * derived.photons)
}

/// `n = n0 + ñI`.
pub fn refractive_index_from_intensity(medium: &MediumSpec, derived: &KerrDerived) -> f64 {
    medium.linear_index + medium.kerr_coefficient * derived.intensity
}

/// Rest arm length and anti-correlated signal: `ℓ1 = ℓ0 − x/2`, `ℓ2 = ℓ0 + x/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometrySpec {
    pub arm_length: f64,
    pub signal_x: f64,
}

impl GeometrySpec {
    pub fn new(arm_length: f64, signal_x: f64) -> Result<Self> {
        let geometry = Self {
            arm_length,
            signal_x,
        };
        geometry.validate()?;
        Ok(geometry)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("arm_length", self.arm_length)?;
        if !self.signal_x.is_finite() {
            return Err(Error::invalid("signal_x", "must be finite"));
        }
        let (l1, l2) = self.arms();
        if l1 <= 0.0 || l2 <= 0.0 {
            return Err(Error::invalid(
                "signal_x",
                format!("arm lengths {l1} and {l2} must both stay positive"),
            ));
        }
        Ok(())
    }

    pub fn arms(&self) -> (f64, f64) {
        (
            self.arm_length - self.signal_x / 2.0,
            self.arm_length + self.signal_x / 2.0,
        )
    }
}

/// Linear (`φj = kℓj`) and Kerr (`zj = φjχ/2`) phases of the two arms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerrPhases {
    pub phi1: f64,
    pub phi2: f64,
    pub z1: f64,
    pub z2: f64,
    /// Kerr phase of the rest arm length, `kℓ0χ/2`.
    pub z0: f64,
    /// Integer `m` minimizing `|z0 − mπ|`; ties go to the even integer.
    pub nearest_m: i64,
    /// `z0 − mπ`, in `[−π/2, π/2]`.
    pub detuning: f64,
}

pub fn kerr_phases(derived: &KerrDerived, geometry: &GeometrySpec) -> KerrPhases {
    let (l1, l2) = geometry.arms();
    let k = derived.wavenumber;
    let phi1 = k * l1;
    let phi2 = k * l2;
    let z0 = k * geometry.arm_length * derived.chi / 2.0;
    let m = (z0 / PI).round_ties_even();
    KerrPhases {
        phi1,
        phi2,
        z1: phi1 * derived.chi / 2.0,
        z2: phi2 * derived.chi / 2.0,
        z0,
        nearest_m: m as i64,
        detuning: z0 - m * PI,
    }
}

/// Smallest rest arm length with `z0 = mπ`, i.e. `ℓ0 = 2mπ/(kχ)`.
///
/// `None` for a linear medium or `m < 1`.
pub fn operating_point_arm_length(derived: &KerrDerived, m: i64) -> Option<f64> {
    if derived.chi <= 0.0 || m < 1 {
        return None;
    }
    let length = 2.0 * m as f64 * PI / (derived.wavenumber * derived.chi);
    length.is_finite().then_some(length)
}

/// Detection efficiency, random relative-phase spread and stray thermal photons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Detector quantum efficiency `η ∈ (0, 1]`.
    pub efficiency: f64,
    /// Standard deviation `σ` of the Gaussian random phase, rad.
    pub phase_sigma: f64,
    /// Mean thermal photon number `N_t` entering through the loss channel.
    pub thermal_photons: f64,
}

impl NoiseSpec {
    pub const IDEAL: NoiseSpec = NoiseSpec {
        efficiency: 1.0,
        phase_sigma: 0.0,
        thermal_photons: 0.0,
    };

    pub fn new(efficiency: f64, phase_sigma: f64, thermal_photons: f64) -> Result<Self> {
        let noise = Self {
            efficiency,
            phase_sigma,
            thermal_photons,
        };
        noise.validate()?;
        Ok(noise)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::invalid(
                "eta",
                format!("efficiency must lie in (0, 1], got {}", self.efficiency),
            ));
        }
        require_non_negative("sigma", self.phase_sigma)?;
        require_non_negative("nt", self.thermal_photons)?;
        Ok(())
    }
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self::IDEAL
    }
}

/// How the rest arm length of a scenario is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArmLength {
    /// Solve `z0 = mπ` for the given `m` (falls back to [`LINEAR_ARM_LENGTH`] if `χ = 0`).
    OperatingPoint(i64),
    Fixed(f64),
}

impl ArmLength {
    pub fn resolve(&self, derived: &KerrDerived) -> Result<f64> {
        match *self {
            ArmLength::Fixed(length) => {
                require_positive("arm_length", length)?;
                Ok(length)
            }
            ArmLength::OperatingPoint(m) => {
                if m < 1 {
                    return Err(Error::invalid(
                        "m",
                        format!("operating-point integer must be >= 1, got {m}"),
                    ));
                }
                if derived.chi == 0.0 {
                    return Ok(LINEAR_ARM_LENGTH);
                }
                operating_point_arm_length(derived, m).ok_or_else(|| {
                    Error::invalid("arm_length", "operating-point arm length is not finite")
                })
            }
        }
    }
}

/// A complete set of physical inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub pulse: PulseSpec,
    pub medium: MediumSpec,
    pub noise: NoiseSpec,
    pub arm: ArmLength,
    pub signal_x: f64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.pulse.validate()?;
        self.medium.validate()?;
        self.noise.validate()
    }

    /// Derived quantities and the concrete geometry.
    pub fn resolve(&self) -> Result<(KerrDerived, GeometrySpec)> {
        self.validate()?;
        let derived = derive(&self.pulse, &self.medium)?;
        let arm_length = self.arm.resolve(&derived)?;
        let geometry = GeometrySpec::new(arm_length, self.signal_x)?;
        Ok((derived, geometry))
    }
}

/// The two built-in design regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    /// Natural gas nonlinearity: ñ ≈ 1e-17 cm²/W, petawatt picosecond pulses.
    #[serde(rename = "natural")]
    Natural,
    /// EIT-enhanced nonlinearity: ñ ≈ 1e-2 cm²/W, megawatt 100 ps pulses.
    #[serde(rename = "giant-eit")]
    GiantEit,
}

impl Preset {
    pub const ALL: [Preset; 2] = [Preset::Natural, Preset::GiantEit];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Natural => "natural",
            Preset::GiantEit => "giant-eit",
        }
    }

    pub fn pulse(self) -> PulseSpec {
        match self {
            Preset::Natural => PulseSpec {
                wavelength: 500e-9,
                duration: 1e-12,
                cross_section: 1e-9,
                power: 1e15,
            },
            Preset::GiantEit => PulseSpec {
                wavelength: 500e-9,
                duration: 100e-12,
                cross_section: 1e-6,
                power: 1e6,
            },
        }
    }

    /// Kerr coefficient in the customary cm²/W.
    pub fn kerr_cm2_per_w(self) -> f64 {
        match self {
            Preset::Natural => 1e-17,
            Preset::GiantEit => 1e-2,
        }
    }

    pub fn medium(self) -> MediumSpec {
        MediumSpec {
            linear_index: 1.0,
            kerr_coefficient: self.kerr_cm2_per_w() * CM2_PER_W,
        }
    }

    pub fn noise(self) -> NoiseSpec {
        NoiseSpec::IDEAL
    }

    /// Preset inputs at the `m = 1` operating point, no signal.
    pub fn scenario(self) -> Scenario {
        Scenario {
            pulse: self.pulse(),
            medium: self.medium(),
            noise: self.noise(),
            arm: ArmLength::OperatingPoint(1),
            signal_x: 0.0,
        }
    }

    pub fn regime(self) -> RegimePreset {
        let pulse = self.pulse();
        let medium = self.medium();
        let arm_length_hint = derive(&pulse, &medium)
            .ok()
            .and_then(|d| operating_point_arm_length(&d, 1))
            .unwrap_or(LINEAR_ARM_LENGTH);
        RegimePreset {
            name: self.name(),
            pulse,
            medium,
            arm_length_hint,
            noise: self.noise(),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "natural" => Ok(Preset::Natural),
            "giant-eit" | "giant_eit" | "giant" => Ok(Preset::GiantEit),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimePreset {
    pub name: &'static str,
    pub pulse: PulseSpec,
    pub medium: MediumSpec,
    /// `m = 1` operating-point rest arm length, m.
    pub arm_length_hint: f64,
    pub noise: NoiseSpec,
}
