//! Closed-form signal mean, noise and displacement sensitivity.
//!
//! All functions are total: they evaluate outside their regime of validity
//! and leave it to [`validity`] to report how far from the assumptions a
//! given configuration sits.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::params::{kerr_phases, GeometrySpec, KerrDerived, KerrPhases, NoiseSpec};

/// Mean photocount difference for a coherent probe, exact in `N` and `χ`.
///
/// ```text
/// ⟨M⟩ = ηN exp{(N/2)[cos 2z1 + cos 2z2 − 2]}
///          · sin{φ + φ2 − φ1 + z2 − z1 + (N/2)[sin 2z2 − sin 2z1]}
/// ```
///
/// with `zj = φj·χ/2` and `φ` the relative phase offset.
pub fn mean_m_exact(
    photons: f64,
    chi: f64,
    phi1: f64,
    phi2: f64,
    phase_offset: f64,
    efficiency: f64,
) -> f64 {
    let z1 = phi1 * chi / 2.0;
    let z2 = phi2 * chi / 2.0;
    let half_n = photons / 2.0;
    let envelope = (half_n * ((2.0 * z1).cos() + (2.0 * z2).cos() - 2.0)).exp();
    let argument =
        phase_offset + (phi2 - phi1) + (z2 - z1) + half_n * ((2.0 * z2).sin() - (2.0 * z1).sin());
    efficiency * photons * envelope * argument.sin()
}

/// Phase-averaged mean near an operating point `z0 ≈ mπ`:
/// `ηN·exp(−Nχ²k²x²/8)·exp(−σ²/2)·sin[kx(1 + χN/2)]`.
pub fn mean_m_approx(photons: f64, chi: f64, k: f64, x: f64, sigma: f64, efficiency: f64) -> f64 {
    let kx = k * x;
    efficiency
        * photons
        * (-photons * chi * chi * kx * kx / 8.0).exp()
        * (-sigma * sigma / 2.0).exp()
        * (kx * (1.0 + chi * photons / 2.0)).sin()
}

/// Small-signal mean `ηN·kx(1 + χN/2)`.
pub fn mean_m_linearized(photons: f64, chi: f64, k: f64, x: f64, efficiency: f64) -> f64 {
    efficiency * photons * k * x * (1.0 + chi * photons / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanVariant {
    Exact,
    ApproxGauss,
    Linearized,
}

/// A mean value tagged with the model that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanModel {
    pub variant: MeanVariant,
    pub value: f64,
}

impl MeanModel {
    /// Evaluates `variant` for a configuration. The exact variant averages over
    /// the random phase analytically, which multiplies it by `exp(−σ²/2)`.
    pub fn evaluate(
        variant: MeanVariant,
        derived: &KerrDerived,
        geometry: &GeometrySpec,
        noise: &NoiseSpec,
    ) -> Self {
        let (n, chi, k) = (derived.photons, derived.chi, derived.wavenumber);
        let eta = noise.efficiency;
        let sigma = noise.phase_sigma;
        let value = match variant {
            MeanVariant::Exact => {
                let phases = kerr_phases(derived, geometry);
                (-sigma * sigma / 2.0).exp()
                    * mean_m_exact(n, chi, phases.phi1, phases.phi2, 0.0, eta)
            }
            MeanVariant::ApproxGauss => mean_m_approx(n, chi, k, geometry.signal_x, sigma, eta),
            MeanVariant::Linearized => mean_m_linearized(n, chi, k, geometry.signal_x, eta),
        };
        Self { variant, value }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceForm {
    /// `ηN + η²N²σ² + ηN·N_t`.
    #[default]
    SmallSigma,
    /// `ηN + η²(N²/2)(1 − e^{−2σ²}) + ηN·N_t`, before expanding in `σ`.
    Exact,
}

/// Background noise `(ΔM)²` at `x = 0`.
pub fn var_m(photons: f64, efficiency: f64, sigma: f64, thermal: f64) -> f64 {
    var_m_with(VarianceForm::SmallSigma, photons, efficiency, sigma, thermal)
}

pub fn var_m_with(form: VarianceForm, photons: f64, efficiency: f64, sigma: f64, thermal: f64) -> f64 {
    let (n, eta) = (photons, efficiency);
    let dephasing = match form {
        VarianceForm::SmallSigma => eta * eta * n * n * sigma * sigma,
        VarianceForm::Exact => eta * eta * n * n / 2.0 * -(-2.0 * sigma * sigma).exp_m1(),
    };
    eta * n + dephasing + eta * n * thermal
}

/// `⟨M0²⟩ = N²/2 + N − (N²/2)cos 2φ` at `x = 0` for a fixed phase offset.
pub fn mean_m0_squared(photons: f64, phase_offset: f64) -> f64 {
    let half_sq = photons * photons / 2.0;
    half_sq + photons - half_sq * (2.0 * phase_offset).cos()
}

/// Displacement resolution of the nonlinear scheme,
/// `√[(1 + ηNσ² + N_t)/(ηk²N)] / (1 + χN/2)`.
pub fn delta_x(photons: f64, chi: f64, k: f64, efficiency: f64, sigma: f64, thermal: f64) -> f64 {
    let (n, eta) = (photons, efficiency);
    ((1.0 + eta * n * sigma * sigma + thermal) / (eta * k * k * n)).sqrt() / (1.0 + chi * n / 2.0)
}

/// Resolution of the same interferometer without the Kerr medium (and no dephasing).
pub fn delta_x_linear(photons: f64, k: f64, efficiency: f64, thermal: f64) -> f64 {
    ((1.0 + thermal) / (efficiency * k * k * photons)).sqrt()
}

/// `Δx / Δx|lin`. Independent of `k`.
pub fn improvement_ratio(photons: f64, chi: f64, efficiency: f64, sigma: f64, thermal: f64) -> f64 {
    delta_x(photons, chi, 1.0, efficiency, sigma, thermal)
        / delta_x_linear(photons, 1.0, efficiency, thermal)
}

/// Relative ultimate-limit scaling `τAλ²/N²` (unit proportionality constant).
///
/// Only ratios of this value are meaningful.
pub fn conjectured_scaling(duration: f64, cross_section: f64, wavelength: f64, photons: f64) -> f64 {
    duration * cross_section * wavelength * wavelength / (photons * photons)
}

/// Thresholds below which a margin ratio counts as "much less than one".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityThresholds {
    pub small_signal: f64,
    pub thermal: f64,
    pub dephasing: f64,
    pub operating_point: f64,
    pub nl_dominant: f64,
}

impl ValidityThresholds {
    pub const DEFAULT_MARGIN: f64 = 1e-2;

    pub const fn uniform(threshold: f64) -> Self {
        Self {
            small_signal: threshold,
            thermal: threshold,
            dephasing: threshold,
            operating_point: threshold,
            nl_dominant: threshold,
        }
    }
}

impl Default for ValidityThresholds {
    fn default() -> Self {
        Self::uniform(Self::DEFAULT_MARGIN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub ratio: f64,
    pub satisfied: bool,
}

impl Margin {
    fn new(ratio: f64, threshold: f64) -> Self {
        Self {
            ratio,
            satisfied: ratio < threshold,
        }
    }
}

/// Margin ratios for the assumptions behind the closed-form sensitivity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityFlags {
    /// `χNk|x|`
    pub small_signal: Margin,
    /// `N_t/N`
    pub weak_thermal: Margin,
    /// `σ`
    pub weak_dephasing: Margin,
    /// `|z0 − mπ|/π`
    pub on_operating_point: Margin,
    /// `(ηNσ² + N_t)/(χ²N²)`
    pub nonlinearity_dominant: Margin,
}

impl ValidityFlags {
    pub fn all_satisfied(&self) -> bool {
        self.margins().iter().all(|m| m.satisfied)
    }

    /// In the order small-signal, thermal, dephasing, operating point, nonlinearity.
    pub fn margins(&self) -> [Margin; 5] {
        [
            self.small_signal,
            self.weak_thermal,
            self.weak_dephasing,
            self.on_operating_point,
            self.nonlinearity_dominant,
        ]
    }
}

/// `a/b` with `0/0 = 0` and `a/0 = ∞` for `a > 0`.
fn ratio(numerator: f64, denominator: f64) -> f64 {
    if numerator == 0.0 {
        0.0
    } else if denominator == 0.0 {
        f64::INFINITY
    } else {
        numerator / denominator
    }
}

pub fn validity(
    derived: &KerrDerived,
    geometry: &GeometrySpec,
    noise: &NoiseSpec,
    thresholds: &ValidityThresholds,
) -> ValidityFlags {
    let phases = kerr_phases(derived, geometry);
    validity_from_phases(derived, geometry, &phases, noise, thresholds)
}

fn validity_from_phases(
    derived: &KerrDerived,
    geometry: &GeometrySpec,
    phases: &KerrPhases,
    noise: &NoiseSpec,
    thresholds: &ValidityThresholds,
) -> ValidityFlags {
    let (n, chi, k) = (derived.photons, derived.chi, derived.wavenumber);
    let sigma = noise.phase_sigma;
    let nt = noise.thermal_photons;
    let chi_n = chi * n;
    ValidityFlags {
        small_signal: Margin::new((chi_n * k * geometry.signal_x).abs(), thresholds.small_signal),
        weak_thermal: Margin::new(ratio(nt, n), thresholds.thermal),
        weak_dephasing: Margin::new(sigma, thresholds.dephasing),
        on_operating_point: Margin::new(phases.detuning.abs() / PI, thresholds.operating_point),
        nonlinearity_dominant: Margin::new(
            ratio(noise.efficiency * n * sigma * sigma + nt, chi_n * chi_n),
            thresholds.nl_dominant,
        ),
    }
}

/// Sensitivity of one configuration together with the validity margins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub delta_x: f64,
    pub delta_x_linear: f64,
    pub improvement: f64,
    pub var_m: f64,
    /// Slope of the linearized mean, `ηNk(1 + χN/2)`.
    pub dmdx: f64,
    pub validity: ValidityFlags,
}

pub fn sensitivity(
    derived: &KerrDerived,
    geometry: &GeometrySpec,
    noise: &NoiseSpec,
    thresholds: &ValidityThresholds,
) -> SensitivityReport {
    let (n, chi, k) = (derived.photons, derived.chi, derived.wavenumber);
    let (eta, sigma, nt) = (noise.efficiency, noise.phase_sigma, noise.thermal_photons);
    let dx = delta_x(n, chi, k, eta, sigma, nt);
    let dx_lin = delta_x_linear(n, k, eta, nt);
    SensitivityReport {
        delta_x: dx,
        delta_x_linear: dx_lin,
        improvement: dx / dx_lin,
        var_m: var_m(n, eta, sigma, nt),
        dmdx: eta * n * k * (1.0 + chi * n / 2.0),
        validity: validity(derived, geometry, noise, thresholds),
    }
}
