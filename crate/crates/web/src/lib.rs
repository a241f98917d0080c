//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string; failures come back as `{"error": "..."}`.

use std::f64::consts::PI;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use nlmi::analytic::{mean_m_exact, ValidityThresholds};
use nlmi::params::Preset;
use nlmi::sweep::{regime_report, run_sweep, GridParameter, GridSpec, Spacing, SweepOptions};
use nlmi::verify::{oracle_moments, rest_phase};
use nlmi::Error;

/// Largest total photon number the in-browser oracle accepts.
pub const MAX_ORACLE_PHOTONS: f64 = 30.0;
/// Largest number of points of any curve.
pub const MAX_POINTS: usize = 2000;

fn respond<T: Serialize>(result: Result<T, Error>) -> String {
    let value = match result {
        Ok(v) => serde_json::to_value(v),
        Err(e) => Ok(serde_json::json!({ "error": e.to_string() })),
    };
    value.map_or_else(|e| format!("{{\"error\":\"{e}\"}}"), |v| v.to_string())
}

fn check_points(points: usize) -> Result<(), Error> {
    if (2..=MAX_POINTS).contains(&points) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field: "points",
            reason: format!("must be in 2..={MAX_POINTS}, got {points}"),
        })
    }
}

#[derive(Debug, Serialize)]
pub struct SensitivityCurve {
    pub preset: &'static str,
    pub tau_s: Vec<f64>,
    pub n_photons: Vec<f64>,
    pub delta_x_m: Vec<f64>,
    pub delta_x_linear_m: Vec<f64>,
    pub improvement: Vec<f64>,
    pub arm_length_m: Vec<f64>,
}

pub fn sensitivity_curve_impl(
    preset: &str,
    tau_lo: f64,
    tau_hi: f64,
    points: usize,
    hold_photons: bool,
) -> Result<SensitivityCurve, Error> {
    check_points(points)?;
    let preset: Preset = preset.parse()?;
    let grid = GridSpec::new(GridParameter::Tau, tau_lo, tau_hi, points, Spacing::Log)?;
    let options = SweepOptions {
        hold_photons,
        ..SweepOptions::default()
    };
    let rows = run_sweep(&preset.scenario(), &[grid], &options)?;
    Ok(SensitivityCurve {
        preset: preset.name(),
        tau_s: rows.iter().map(|r| r.tau_s).collect(),
        n_photons: rows.iter().map(|r| r.n_photons).collect(),
        delta_x_m: rows.iter().map(|r| r.delta_x_m).collect(),
        delta_x_linear_m: rows.iter().map(|r| r.delta_x_linear_m).collect(),
        improvement: rows.iter().map(|r| r.improvement).collect(),
        arm_length_m: rows.iter().map(|r| r.arm_length_m).collect(),
    })
}

/// Δx, Δx|lin and their ratio against pulse duration for a preset,
/// with the arm length kept on the first operating point.
#[wasm_bindgen]
pub fn sensitivity_curve(preset: &str, tau_lo: f64, tau_hi: f64, points: usize, hold_photons: bool) -> String {
    respond(sensitivity_curve_impl(preset, tau_lo, tau_hi, points, hold_photons))
}

#[derive(Debug, Serialize)]
pub struct MeanCurve {
    pub photons: f64,
    pub chi: f64,
    pub offset: Vec<f64>,
    pub oracle: Vec<f64>,
    pub closed_form: Vec<f64>,
    pub max_abs_diff: f64,
}

pub fn oracle_mean_curve_impl(photons: f64, chi: f64, split: f64, points: usize) -> Result<MeanCurve, Error> {
    check_points(points)?;
    if !(photons.is_finite() && (0.0..=MAX_ORACLE_PHOTONS).contains(&photons)) {
        return Err(Error::InvalidParameter {
            field: "photons",
            reason: format!("must be in [0, {MAX_ORACLE_PHOTONS}], got {photons}"),
        });
    }
    if !(chi.is_finite() && (0.0..=1.0).contains(&chi)) {
        return Err(Error::InvalidParameter {
            field: "chi",
            reason: format!("must be in [0, 1], got {chi}"),
        });
    }
    if !split.is_finite() {
        return Err(Error::InvalidParameter {
            field: "split",
            reason: "must be finite".into(),
        });
    }
    let base = rest_phase(chi);
    let (phi1, phi2) = (base - split / 2.0, base + split / 2.0);
    let mut curve = MeanCurve {
        photons,
        chi,
        offset: Vec::with_capacity(points),
        oracle: Vec::with_capacity(points),
        closed_form: Vec::with_capacity(points),
        max_abs_diff: 0.0,
    };
    for i in 0..points {
        let off = -PI + 2.0 * PI * i as f64 / (points - 1) as f64;
        let m = oracle_moments(photons, chi, phi1, phi2, off, nlmi::oracle::DEFAULT_DIM_MARGIN)?;
        let closed = mean_m_exact(photons, chi, phi1, phi2, off, 1.0);
        curve.max_abs_diff = curve.max_abs_diff.max((m.mean_m - closed).abs());
        curve.offset.push(off);
        curve.oracle.push(m.mean_m);
        curve.closed_form.push(closed);
    }
    Ok(curve)
}

/// Fock-space ⟨M⟩ against the closed form as the relative phase offset
/// runs over one period. `split` is the arm phase difference around the
/// z0 = π rest point.
#[wasm_bindgen]
pub fn oracle_mean_curve(photons: f64, chi: f64, split: f64, points: usize) -> String {
    respond(oracle_mean_curve_impl(photons, chi, split, points))
}

/// Operating point, signal window and noise bounds of a preset.
#[wasm_bindgen]
pub fn regime(preset: &str, m: i32, threshold: f64) -> String {
    let thresholds = if threshold.is_finite() && threshold > 0.0 {
        ValidityThresholds::uniform(threshold)
    } else {
        return respond::<()>(Err(Error::InvalidParameter {
            field: "threshold",
            reason: format!("must be finite and > 0, got {threshold}"),
        }));
    };
    respond(preset.parse().and_then(|p| regime_report(p, i64::from(m), thresholds)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn curve_has_requested_points() {
        let v = parse(&sensitivity_curve("giant-eit", 1e-11, 1e-9, 25, true));
        assert_eq!(v["delta_x_m"].as_array().unwrap().len(), 25);
        assert_eq!(v["tau_s"][0].as_f64(), Some(1e-11));
        assert_eq!(v["tau_s"][24].as_f64(), Some(1e-9));
        let n = v["n_photons"].as_array().unwrap();
        assert!(n.iter().all(|x| (x.as_f64().unwrap() / n[0].as_f64().unwrap() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn oracle_curve_tracks_closed_form() {
        let curve = oracle_mean_curve_impl(9.0, 0.1, 0.2, 41).unwrap();
        assert!(curve.max_abs_diff < 1e-9);
        assert!(curve.oracle.iter().any(|&m| m.abs() > 1.0));
    }

    #[test]
    fn errors_are_reported_as_json() {
        assert!(parse(&sensitivity_curve("nope", 1e-11, 1e-9, 5, false))["error"].is_string());
        assert!(parse(&oracle_mean_curve(1e3, 0.1, 0.0, 5))["error"].is_string());
        assert!(parse(&oracle_mean_curve(4.0, 0.1, 0.0, 1))["error"].is_string());
        assert!(parse(&regime("natural", 0, 1e-2))["error"].is_string());
        assert!(parse(&regime("natural", 1, -1.0))["error"].is_string());
    }

    #[test]
    fn regime_matches_core() {
        let v = parse(&regime("giant-eit", 1, 1e-2));
        let l0 = v["arm_length_m"].as_f64().unwrap();
        let core = regime_report(Preset::GiantEit, 1, ValidityThresholds::default()).unwrap();
        assert!((l0 / core.arm_length_m - 1.0).abs() < 1e-15);
    }
}
