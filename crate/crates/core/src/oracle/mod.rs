//! Exact two-mode simulator in a truncated Fock basis.
//!
//! The probe enters the interferometer as the product `|α/√2⟩₁|α/√2⟩₂` of
//! coherent states in the internal arm modes. Each arm applies the Kerr
//! propagator `exp[iφj(N̂j + χN̂j²/2)]`, which is diagonal in the number basis,
//! so the evolved state is available exactly up to the truncation of the
//! coherent-state tails. Moments of `M = i(a2†a1 − a1†a2)` and `M²` are then
//! plain coefficient contractions.
//!
//! Detector efficiency, thermal photons and the Gaussian random phase are
//! applied at the level of moments ([`noisy_moments`]); the random phase can
//! also be averaged by seeded Monte Carlo ([`monte_carlo_phase`]) as an
//! independent check of the analytic Gaussian factors.

mod phase;
mod state;

pub use phase::{monte_carlo_phase, monte_carlo_phase_on_stream, PhaseAverage};
pub use state::{
    coherent_vector, coherent_vector_checked, default_dim, dim_with_margin, moments, noisy_moments,
    product_input, product_input_with_budget, verify_displacement, CoherentAmplitudes, MomentSet, TwoModeState, DEFAULT_DIM_MARGIN,
    DEFAULT_TRUNCATION_BUDGET,
};
