//! Kerr-nonlinear Michelson interferometer metrology.
//!
//! A Michelson interferometer embedded in a Kerr medium and probed with
//! classical (coherent) light pulses picks up a photon-number dependent phase
//! in each arm. That phase steepens the response of the difference photocount
//! `M = i(a2†a1 − a1†a2)` to an anti-correlated arm-length change `x`, so the
//! displacement resolution beats the linear shot-noise limit by a factor of
//! roughly `2/(χN)`.
//!
//! The crate is organized around two independent routes to the same numbers:
//!
//! - [`analytic`]: closed-form signal mean, noise budget and sensitivity
//!   `Δx`, valid for any photon number (the physically interesting regimes
//!   have `N ~ 10^14 .. 10^21`).
//! - [`oracle`]: an exact brute-force simulator in a truncated two-mode Fock
//!   basis, usable for tens of photons, that certifies the closed forms.
//!
//! [`params`] holds the physical inputs and the two built-in regime presets,
//! [`sweep`] evaluates the closed forms over parameter grids, and [`verify`]
//! runs the oracle-versus-analytic equivalence suite.
//!
//! ```
//! use nlmi::params::Preset;
//! use nlmi::sweep::regime_report;
//!
//! let report = regime_report(Preset::GiantEit, 1, Default::default()).unwrap();
//! assert!(report.row.improvement < 1e-5);
//! assert!(report.arm_length_m > 10.0 && report.arm_length_m < 1000.0);
//! ```

pub mod analytic;
pub mod error;
pub mod oracle;
pub mod params;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
