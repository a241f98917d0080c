//! Oracle-versus-analytic equivalence suite.
//!
//! Each family pits the truncated Fock simulation against one closed form:
//!
//! | family         | closed form                                         | metric        |
//! |----------------|-----------------------------------------------------|---------------|
//! | `mean`         | exact coherent-state mean `⟨M⟩`                     | relative error |
//! | `displacement` | `⟨β|e^{i2zN̂}a|β⟩ = β exp[|β|²(e^{i2z} − 1)]`        | relative error |
//! | `variance`     | `⟨M0²⟩ = N²/2 + N − (N²/2)cos 2φ` at `x = 0`        | relative error |
//! | `gaussian`     | Gaussian phase factors `e^{−σ²/2}`, `e^{−2σ²}`      | Monte Carlo z-score |
//! | `noise`        | `ηN + η²(N²/2)(1 − e^{−2σ²}) + ηN·N_t`              | relative error |
//!
//! Relative errors are taken against `max(|expected|, 1)`: moments below one
//! photon are compared absolutely.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::{mean_m0_squared, mean_m_exact, var_m, var_m_with, VarianceForm};
use crate::error::{Error, Result};
use crate::oracle::{
    dim_with_margin, moments, monte_carlo_phase_on_stream, noisy_moments, product_input, verify_displacement,
    MomentSet, DEFAULT_DIM_MARGIN,
};
use crate::params::NoiseSpec;

/// Largest photon number the suite accepts.
pub const MAX_PHOTONS_CAP: u32 = 30;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_MC_SAMPLES: usize = 100_000;
/// Monte Carlo estimates must land within this many standard errors.
pub const MC_Z_LIMIT: f64 = 3.0;

pub const CHI_GRID: [f64; 3] = [0.0, 0.01, 0.1];
pub const SIGMA_GRID: [f64; 3] = [0.0, 0.05, 0.2];
pub const ETA_GRID: [f64; 2] = [0.5, 1.0];
pub const NT_GRID: [f64; 2] = [0.0, 2.0];
pub const MC_SIGMAS: [f64; 2] = [0.1, 0.3];
pub const VARIANCE_OFFSETS: [f64; 8] = [0.0, 0.3, PI / 4.0, 1.0, PI / 2.0, 2.0, 2.5, 3.0 * PI / 4.0];
pub const DISPLACEMENT_MEAN_PHOTONS: [f64; 6] = [0.0, 0.5, 1.0, 2.5, 6.0, 10.0];
pub const DISPLACEMENT_KERR_PHASES: [f64; 6] = [0.0, PI / 8.0, 0.3, PI / 2.0, 2.0, PI];

/// Linear phase used as the rest point when `χ = 0`.
const LINEAR_REST_PHASE: f64 = 1.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Mean,
    Displacement,
    Variance,
    Gaussian,
    Noise,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Mean, Family::Displacement, Family::Variance, Family::Gaussian, Family::Noise];

    pub fn name(self) -> &'static str {
        match self {
            Family::Mean => "mean",
            Family::Displacement => "displacement",
            Family::Variance => "variance",
            Family::Gaussian => "gaussian",
            Family::Noise => "noise",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::invalid("cases", format!("unknown case family `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub max_photons: u32,
    /// Additive term of the per-mode dimension `µ + 10√µ + margin`.
    pub dim_margin: f64,
    pub tolerance: f64,
    pub seed: u64,
    pub mc_samples: usize,
    pub families: Vec<Family>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_photons: 25,
            dim_margin: DEFAULT_DIM_MARGIN,
            tolerance: DEFAULT_TOLERANCE,
            seed: DEFAULT_SEED,
            mc_samples: DEFAULT_MC_SAMPLES,
            families: Family::ALL.to_vec(),
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_photons > MAX_PHOTONS_CAP {
            return Err(Error::invalid(
                "max-photons",
                format!("at most {MAX_PHOTONS_CAP}, got {}", self.max_photons),
            ));
        }
        if !(self.dim_margin.is_finite() && self.dim_margin >= 0.0) {
            return Err(Error::invalid("dim-margin", "must be finite and >= 0"));
        }
        if !(self.tolerance.is_finite() && self.tolerance >= 0.0) {
            return Err(Error::invalid("tolerance", "must be finite and >= 0"));
        }
        if self.mc_samples < 2 {
            return Err(Error::invalid("samples", "need at least 2 Monte Carlo samples"));
        }
        Ok(())
    }

    /// Perfect squares `1, 4, 9, ...` up to the cap, or just `0` for a cap of 0.
    pub fn photon_numbers(&self) -> Vec<f64> {
        if self.max_photons == 0 {
            return vec![0.0];
        }
        (1..)
            .map(|k: u32| k * k)
            .take_while(|&n| n <= self.max_photons)
            .map(f64::from)
            .collect()
    }

    fn dim(&self, mean_photons_per_mode: f64) -> usize {
        dim_with_margin(mean_photons_per_mode, self.dim_margin)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub family: Family,
    pub label: String,
    pub expected: f64,
    pub actual: f64,
    /// Relative error, or z-score for the `gaussian` family.
    pub error: f64,
    pub limit: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySummary {
    pub family: Family,
    pub cases: usize,
    pub worst_error: f64,
    pub limit: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub families: Vec<FamilySummary>,
    pub cases: Vec<CaseResult>,
    pub passed: bool,
}

/// `|actual − expected| / max(|expected|, 1)`.
pub fn relative_error(actual: f64, expected: f64) -> f64 {
    (actual - expected).abs() / expected.abs().max(1.0)
}

/// One `(φ1, φ2, φ)` configuration of the mean family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseSetting {
    /// Arms split by `dphi` around the `z0 = π` rest point (or a fixed phase if `χ = 0`).
    AroundRest { dphi: f64, offset: f64 },
    Absolute { phi1: f64, phi2: f64, offset: f64 },
}

pub const PHASE_SETTINGS: [PhaseSetting; 5] = [
    PhaseSetting::AroundRest { dphi: 0.02, offset: 0.0 },
    PhaseSetting::AroundRest { dphi: 0.3, offset: 0.4 },
    PhaseSetting::AroundRest { dphi: -0.15, offset: 1.1 },
    PhaseSetting::Absolute { phi1: 0.30, phi2: 0.32, offset: 0.0 },
    PhaseSetting::Absolute { phi1: 1.0, phi2: 2.5, offset: -0.7 },
];

/// Linear phase of the rest arm length with `z0 = π`.
pub fn rest_phase(chi: f64) -> f64 {
    if chi > 0.0 {
        2.0 * PI / chi
    } else {
        LINEAR_REST_PHASE
    }
}

impl PhaseSetting {
    /// `(φ1, φ2, offset)`
    pub fn resolve(self, chi: f64) -> (f64, f64, f64) {
        match self {
            PhaseSetting::AroundRest { dphi, offset } => {
                let base = rest_phase(chi);
                (base - dphi / 2.0, base + dphi / 2.0, offset)
            }
            PhaseSetting::Absolute { phi1, phi2, offset } => (phi1, phi2, offset),
        }
    }
}

/// Noiseless oracle moments for `N` total photons after Kerr propagation and
/// a phase offset.
pub fn oracle_moments(
    photons: f64,
    chi: f64,
    phi1: f64,
    phi2: f64,
    offset: f64,
    dim_margin: f64,
) -> Result<MomentSet> {
    let dim = dim_with_margin(photons / 2.0, dim_margin);
    let state = product_input(Complex64::new(photons.sqrt(), 0.0), dim)?
        .apply_kerr(phi1, phi2, chi)
        .apply_phase_offset(offset);
    Ok(moments(&state))
}

fn case(family: Family, label: String, expected: f64, actual: f64, limit: f64) -> CaseResult {
    let error = relative_error(actual, expected);
    CaseResult {
        family,
        label,
        expected,
        actual,
        error,
        limit,
        passed: error <= limit,
    }
}

fn mean_cases(config: &VerifyConfig) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for n in config.photon_numbers() {
        for chi in CHI_GRID {
            for (i, setting) in PHASE_SETTINGS.iter().enumerate() {
                let (phi1, phi2, offset) = setting.resolve(chi);
                let oracle = oracle_moments(n, chi, phi1, phi2, offset, config.dim_margin)?;
                let analytic = mean_m_exact(n, chi, phi1, phi2, offset, 1.0);
                out.push(case(
                    Family::Mean,
                    format!("N={n} chi={chi} phase#{i}"),
                    analytic,
                    oracle.mean_m,
                    config.tolerance,
                ));
            }
        }
    }
    Ok(out)
}

fn displacement_cases(config: &VerifyConfig) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    let limit = (config.max_photons as f64).min(10.0);
    for mu in DISPLACEMENT_MEAN_PHOTONS.into_iter().filter(|&mu| mu <= limit) {
        let beta = Complex64::from_polar(mu.sqrt(), 0.7);
        for z in DISPLACEMENT_KERR_PHASES {
            let residual = verify_displacement(beta, z, config.dim(mu))?;
            let closed = beta * (beta.norm_sqr() * (Complex64::cis(2.0 * z) - 1.0)).exp();
            let error = residual / closed.norm().max(1.0);
            out.push(CaseResult {
                family: Family::Displacement,
                label: format!("|beta|^2={mu} z={z:.6}"),
                expected: 0.0,
                actual: residual,
                error,
                limit: config.tolerance,
                passed: error <= config.tolerance,
            });
        }
    }
    Ok(out)
}

fn variance_cases(config: &VerifyConfig) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for n in config.photon_numbers() {
        for chi in CHI_GRID {
            let rest = rest_phase(chi);
            for offset in VARIANCE_OFFSETS {
                let oracle = oracle_moments(n, chi, rest, rest, offset, config.dim_margin)?;
                out.push(case(
                    Family::Variance,
                    format!("N={n} chi={chi} phi={offset:.6}"),
                    mean_m0_squared(n, offset),
                    oracle.mean_m2,
                    config.tolerance,
                ));
            }
        }
    }
    Ok(out)
}

fn gaussian_cases(config: &VerifyConfig) -> Result<Vec<CaseResult>> {
    let n = *config.photon_numbers().last().unwrap_or(&0.0);
    let chi = 0.1;
    let (phi1, phi2, _) = PHASE_SETTINGS[1].resolve(chi);
    let base = oracle_moments(n, chi, phi1, phi2, 0.0, config.dim_margin)?;
    let at_rest = {
        let rest = rest_phase(chi);
        oracle_moments(n, chi, rest, rest, 0.0, config.dim_margin)?
    };
    let mut out = Vec::new();
    let mut stream = 0u64;
    for sigma in MC_SIGMAS {
        let noise = NoiseSpec::new(1.0, sigma, 0.0)?;

        // first harmonic: ⟨M⟩(φ) = 2 Im(e^{iφ}⟨a1†a2⟩)
        let c = base.cross_c;
        let mc = monte_carlo_phase_on_stream(
            |phi| 2.0 * (Complex64::cis(phi) * c).im,
            sigma,
            config.mc_samples,
            config.seed,
            stream,
        )?;
        stream += 1;
        let analytic = noisy_moments(&base, &noise)?.mean_m;
        out.push(z_case(format!("<M> N={n} sigma={sigma}"), analytic, mc.mean, mc.z_score(analytic)));

        // second harmonic: ⟨M0²⟩(φ) = const − 2 Re(e^{2iφ}⟨a1†²a2²⟩)
        let d = at_rest.pair_d;
        let constant = 2.0 * at_rest.mean_n1n2 + at_rest.total_photons();
        let mc = monte_carlo_phase_on_stream(
            |phi| constant - 2.0 * (Complex64::cis(2.0 * phi) * d).re,
            sigma,
            config.mc_samples,
            config.seed,
            stream,
        )?;
        stream += 1;
        let analytic = noisy_moments(&at_rest, &noise)?.mean_m2;
        out.push(z_case(format!("<M0^2> N={n} sigma={sigma}"), analytic, mc.mean, mc.z_score(analytic)));
    }
    Ok(out)
}

fn z_case(label: String, expected: f64, actual: f64, z: f64) -> CaseResult {
    CaseResult {
        family: Family::Gaussian,
        label,
        expected,
        actual,
        error: z,
        limit: MC_Z_LIMIT,
        passed: z <= MC_Z_LIMIT,
    }
}

fn noise_cases(config: &VerifyConfig) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for n in config.photon_numbers() {
        let chi = 0.1;
        let rest = rest_phase(chi);
        let noiseless = oracle_moments(n, chi, rest, rest, 0.0, config.dim_margin)?;
        for sigma in SIGMA_GRID {
            for eta in ETA_GRID {
                for nt in NT_GRID {
                    let noise = NoiseSpec::new(eta, sigma, nt)?;
                    let noisy = noisy_moments(&noiseless, &noise)?;
                    let variance = noisy.variance_m();
                    let exact = var_m_with(VarianceForm::Exact, n, eta, sigma, nt);
                    let small_sigma = var_m(n, eta, sigma, nt);
                    // the small-σ form may only deviate by the dropped σ⁴-order term
                    let allowed = (small_sigma - exact).abs() + config.tolerance * exact.abs().max(1.0);
                    let mut result = case(
                        Family::Noise,
                        format!("N={n} sigma={sigma} eta={eta} nt={nt}"),
                        exact,
                        variance,
                        config.tolerance,
                    );
                    result.passed &= (variance - small_sigma).abs() <= allowed;
                    out.push(result);
                }
            }
        }
    }
    Ok(out)
}

pub fn run_family(family: Family, config: &VerifyConfig) -> Result<Vec<CaseResult>> {
    match family {
        Family::Mean => mean_cases(config),
        Family::Displacement => displacement_cases(config),
        Family::Variance => variance_cases(config),
        Family::Gaussian => gaussian_cases(config),
        Family::Noise => noise_cases(config),
    }
}

pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport> {
    config.validate()?;
    let mut families: Vec<Family> = config.families.clone();
    families.sort();
    families.dedup();

    #[cfg(feature = "parallel")]
    let per_family: Vec<Vec<CaseResult>> = {
        use rayon::prelude::*;
        families
            .par_iter()
            .map(|&f| run_family(f, config))
            .collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let per_family: Vec<Vec<CaseResult>> = families
        .iter()
        .map(|&f| run_family(f, config))
        .collect::<Result<_>>()?;

    let summaries: Vec<FamilySummary> = families
        .iter()
        .zip(&per_family)
        .map(|(&family, cases)| FamilySummary {
            family,
            cases: cases.len(),
            worst_error: cases.iter().map(|c| c.error).fold(0.0, f64::max),
            limit: cases.first().map_or(config.tolerance, |c| c.limit),
            passed: cases.iter().all(|c| c.passed),
        })
        .collect();
    let passed = summaries.iter().all(|s| s.passed);
    Ok(VerifyReport {
        config: VerifyConfig {
            families,
            ..config.clone()
        },
        families: summaries,
        cases: per_family.into_iter().flatten().collect(),
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(families: &[Family]) -> VerifyConfig {
        VerifyConfig {
            max_photons: 9,
            mc_samples: 20_000,
            families: families.to_vec(),
            ..Default::default()
        }
    }

    #[test]
    fn photon_grid() {
        assert_eq!(VerifyConfig::default().photon_numbers(), vec![1.0, 4.0, 9.0, 16.0, 25.0]);
        let vac = VerifyConfig {
            max_photons: 0,
            ..Default::default()
        };
        assert_eq!(vac.photon_numbers(), vec![0.0]);
    }

    #[test]
    fn small_suite_passes() {
        let report = run_verify(&quick(&Family::ALL)).unwrap();
        for s in &report.families {
            assert!(s.passed, "{s:?}");
        }
        assert!(report.passed);
    }

    #[test]
    fn zero_tolerance_fails() {
        let config = VerifyConfig {
            tolerance: 0.0,
            ..quick(&[Family::Mean, Family::Variance])
        };
        assert!(!run_verify(&config).unwrap().passed);
    }

    #[test]
    fn vacuum_only() {
        let config = VerifyConfig {
            max_photons: 0,
            ..Default::default()
        };
        let report = run_verify(&config).unwrap();
        assert!(report.passed);
        for c in report.cases.iter().filter(|c| c.family != Family::Displacement) {
            assert_eq!(c.actual, 0.0, "{c:?}");
        }
    }

    #[test]
    fn rejects_out_of_range_config() {
        let config = VerifyConfig {
            max_photons: 31,
            ..Default::default()
        };
        assert!(run_verify(&config).is_err());
        assert!("bogus".parse::<Family>().is_err());
    }
}
