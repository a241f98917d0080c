use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// Sample mean of a phase-dependent quantity and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAverage {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl PhaseAverage {
    /// `|mean − expected|` in units of the standard error (0 if both agree exactly).
    pub fn z_score(&self, expected: f64) -> f64 {
        let diff = (self.mean - expected).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.stderr
        }
    }
}

/// Averages `mean_fn(φ)` over `φ ~ N(0, σ²)` by seeded Monte Carlo.
pub fn monte_carlo_phase<F>(mean_fn: F, sigma: f64, samples: usize, seed: u64) -> Result<PhaseAverage>
where
    F: Fn(f64) -> f64,
{
    monte_carlo_phase_on_stream(mean_fn, sigma, samples, seed, 0)
}

/// Same as [`monte_carlo_phase`] on an independent ChaCha stream, so parallel
/// tasks sharing one seed never share random numbers.
pub fn monte_carlo_phase_on_stream<F>(
    mean_fn: F,
    sigma: f64,
    samples: usize,
    seed: u64,
    stream: u64,
) -> Result<PhaseAverage>
where
    F: Fn(f64) -> f64,
{
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::invalid("sigma", format!("must be finite and >= 0, got {sigma}")));
    }
    if samples < 2 {
        return Err(Error::invalid("samples", format!("need at least 2, got {samples}")));
    }
    if sigma == 0.0 {
        return Ok(PhaseAverage {
            mean: mean_fn(0.0),
            stderr: 0.0,
            samples,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::invalid("sigma", e.to_string()))?;

    // Welford
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..samples {
        let value = mean_fn(normal.sample(&mut rng));
        let delta = value - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (value - mean);
    }
    let variance = m2 / (samples - 1) as f64;
    Ok(PhaseAverage {
        mean,
        stderr: (variance / samples as f64).sqrt(),
        samples,
    })
}
