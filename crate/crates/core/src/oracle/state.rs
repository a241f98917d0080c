use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::NoiseSpec;

/// Probability mass a truncated coherent state may lose.
pub const DEFAULT_TRUNCATION_BUDGET: f64 = 1e-10;
/// Additive term in the default per-mode dimension `µ + 10√µ + 20`.
pub const DEFAULT_DIM_MARGIN: f64 = 20.0;

/// Default per-mode Fock dimension for a coherent state of mean photon number `µ`.
pub fn default_dim(mean_photons: f64) -> usize {
    dim_with_margin(mean_photons, DEFAULT_DIM_MARGIN)
}

/// `ceil(µ + 10√µ + margin)`, at least 1.
pub fn dim_with_margin(mean_photons: f64, margin: f64) -> usize {
    let mu = mean_photons.max(0.0);
    ((mu + 10.0 * mu.sqrt() + margin).ceil() as usize).max(1)
}

/// Number-basis amplitudes of a coherent state, truncated to `n < dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentAmplitudes {
    pub beta: Complex64,
    pub amplitudes: Vec<Complex64>,
    /// Probability carried by the discarded levels `n ≥ dim`.
    pub tail_mass: f64,
}

impl CoherentAmplitudes {
    pub fn captured_norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn check(self, budget: f64) -> Result<Self> {
        if self.tail_mass > budget {
            return Err(Error::Truncation {
                dim: self.amplitudes.len(),
                tail: self.tail_mass,
                budget,
                mean_photons: self.beta.norm_sqr(),
            });
        }
        Ok(self)
    }
}

/// `e^{−|β|²/2} βⁿ/√(n!)` for `n < dim`.
///
/// Magnitudes come from a log-domain recurrence so that neither `βⁿ` nor
/// `n!` is ever formed. The tail mass is summed explicitly past the cut.
pub fn coherent_vector(beta: Complex64, dim: usize) -> Result<CoherentAmplitudes> {
    if dim == 0 {
        return Err(Error::invalid("dim", "Fock dimension must be >= 1"));
    }
    let mu = beta.norm_sqr();
    if !mu.is_finite() {
        return Err(Error::invalid("beta", "coherent amplitude must be finite"));
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    if mu == 0.0 {
        amplitudes[0] = Complex64::new(1.0, 0.0);
        return Ok(CoherentAmplitudes {
            beta,
            amplitudes,
            tail_mass: 0.0,
        });
    }

    let ln_abs_beta = beta.norm().ln();
    let theta = beta.arg();
    let mut ln_mag = -mu / 2.0;
    for (n, slot) in amplitudes.iter_mut().enumerate() {
        if n > 0 {
            ln_mag += ln_abs_beta - 0.5 * (n as f64).ln();
        }
        *slot = Complex64::from_polar(ln_mag.exp(), n as f64 * theta);
    }

    // Poisson terms beyond the cut, continued until they stop contributing.
    let mut tail_mass = 0.0;
    let mut ln_prob = 2.0 * ln_mag;
    let mut n = dim;
    loop {
        ln_prob += mu.ln() - (n as f64).ln();
        let term = ln_prob.exp();
        tail_mass += term;
        if n as f64 > mu && (term == 0.0 || term < tail_mass * 1e-17) {
            break;
        }
        n += 1;
    }

    Ok(CoherentAmplitudes {
        beta,
        amplitudes,
        tail_mass,
    })
}

pub fn coherent_vector_checked(beta: Complex64, dim: usize, budget: f64) -> Result<CoherentAmplitudes> {
    coherent_vector(beta, dim)?.check(budget)
}

/// Pure state of the two internal arm modes, `Σ c[n][m] |n⟩₁|m⟩₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    dim1: usize,
    dim2: usize,
    /// Row-major, `coeffs[n * dim2 + m]`.
    coeffs: Vec<Complex64>,
    /// Norm lost to truncation when the state was built.
    trunc_loss: f64,
}

impl TwoModeState {
    pub fn from_coeffs(dim1: usize, dim2: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if dim1 == 0 || dim2 == 0 {
            return Err(Error::invalid("dim", "Fock dimensions must be >= 1"));
        }
        if coeffs.len() != dim1 * dim2 {
            return Err(Error::invalid(
                "coeffs",
                format!("expected {} coefficients, got {}", dim1 * dim2, coeffs.len()),
            ));
        }
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        Ok(Self {
            dim1,
            dim2,
            coeffs,
            trunc_loss: (1.0 - norm).max(0.0),
        })
    }

    pub fn vacuum() -> Self {
        Self {
            dim1: 1,
            dim2: 1,
            coeffs: vec![Complex64::new(1.0, 0.0)],
            trunc_loss: 0.0,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim1, self.dim2)
    }

    pub fn coeff(&self, n: usize, m: usize) -> Complex64 {
        if n < self.dim1 && m < self.dim2 {
            self.coeffs[n * self.dim2 + m]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn trunc_loss(&self) -> f64 {
        self.trunc_loss
    }

    fn map_diagonal(&self, phase: impl Fn(usize, usize) -> f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        for n in 0..self.dim1 {
            for m in 0..self.dim2 {
                coeffs[n * self.dim2 + m] *= Complex64::cis(phase(n, m));
            }
        }
        Self {
            coeffs,
            ..self.clone()
        }
    }

    /// Kerr propagation through both arms:
    /// `c[n][m] → c[n][m]·exp{i[φ1(n + χn²/2) + φ2(m + χm²/2)]}`.
    pub fn apply_kerr(&self, phi1: f64, phi2: f64, chi: f64) -> Self {
        let generator = |n: usize| {
            let n = n as f64;
            n + chi * n * n / 2.0
        };
        self.map_diagonal(|n, m| phi1 * generator(n) + phi2 * generator(m))
    }

    /// Rotates mode 2 by `e^{iφN̂2}`, which multiplies `⟨a1†a2⟩` by `e^{iφ}`.
    pub fn apply_phase_offset(&self, phase_offset: f64) -> Self {
        self.map_diagonal(|_, m| phase_offset * m as f64)
    }
}

/// Product of coherent states `|α/√2⟩₁|α/√2⟩₂` with `dim` levels per mode.
pub fn product_input(alpha: Complex64, dim: usize) -> Result<TwoModeState> {
    product_input_with_budget(alpha, dim, DEFAULT_TRUNCATION_BUDGET)
}

pub fn product_input_with_budget(alpha: Complex64, dim: usize, budget: f64) -> Result<TwoModeState> {
    let beta = alpha / std::f64::consts::SQRT_2;
    let single = coherent_vector_checked(beta, dim, budget)?;
    let amps = &single.amplitudes;
    let coeffs = amps
        .iter()
        .flat_map(|&cn| amps.iter().map(move |&cm| cn * cm))
        .collect();
    let mut state = TwoModeState::from_coeffs(dim, dim, coeffs)?;
    state.trunc_loss = 1.0 - (1.0 - single.tail_mass).powi(2);
    Ok(state)
}

/// Moments of the photon numbers and of `M`, `M²` for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub mean_n1: f64,
    pub mean_n2: f64,
    pub mean_n1n2: f64,
    /// `⟨a1†a2⟩`
    pub cross_c: Complex64,
    /// `⟨a1†²a2²⟩`
    pub pair_d: Complex64,
    /// `⟨M⟩ = 2 Im⟨a1†a2⟩`
    pub mean_m: f64,
    /// `⟨M²⟩ = 2⟨N̂1N̂2⟩ + ⟨N̂1⟩ + ⟨N̂2⟩ − 2 Re⟨a1†²a2²⟩`
    pub mean_m2: f64,
    pub trunc_loss: f64,
}

impl MomentSet {
    pub fn total_photons(&self) -> f64 {
        self.mean_n1 + self.mean_n2
    }

    pub fn variance_m(&self) -> f64 {
        self.mean_m2 - self.mean_m * self.mean_m
    }
}

pub fn moments(state: &TwoModeState) -> MomentSet {
    let (d1, d2) = state.dims();
    let mut n1 = 0.0;
    let mut n2 = 0.0;
    let mut n1n2 = 0.0;
    let mut cross = Complex64::new(0.0, 0.0);
    let mut pair = Complex64::new(0.0, 0.0);
    for n in 0..d1 {
        for m in 0..d2 {
            let c = state.coeff(n, m);
            let p = c.norm_sqr();
            let (nf, mf) = (n as f64, m as f64);
            n1 += nf * p;
            n2 += mf * p;
            n1n2 += nf * mf * p;
            // a1†a2 |n, m⟩ = √((n+1)m) |n+1, m−1⟩
            if m >= 1 && n + 1 < d1 {
                cross += state.coeff(n + 1, m - 1).conj() * c * ((nf + 1.0) * mf).sqrt();
            }
            // a1†²a2² |n, m⟩ = √((n+1)(n+2)m(m−1)) |n+2, m−2⟩
            if m >= 2 && n + 2 < d1 {
                pair += state.coeff(n + 2, m - 2).conj()
                    * c
                    * ((nf + 1.0) * (nf + 2.0) * mf * (mf - 1.0)).sqrt();
            }
        }
    }
    MomentSet {
        mean_n1: n1,
        mean_n2: n2,
        mean_n1n2: n1n2,
        cross_c: cross,
        pair_d: pair,
        mean_m: 2.0 * cross.im,
        mean_m2: 2.0 * n1n2 + n1 + n2 - 2.0 * pair.re,
        trunc_loss: state.trunc_loss(),
    }
}

/// Applies detector efficiency, thermal photons and Gaussian phase
/// randomization to noiseless moments.
///
/// The random phase multiplies `⟨a1†a2⟩` by `e^{iφ}` and `⟨a1†²a2²⟩` by
/// `e^{2iφ}`; their Gaussian averages are `e^{−σ²/2}` and `e^{−2σ²}`. Loss and
/// thermal light contribute `η(N_t + 1 − η)⟨N̂1 + N̂2⟩` to `⟨M²⟩`. In the
/// returned set `mean_n1`/`mean_n2` are the detected photon numbers and
/// `mean_n1n2` the signal-mode part `η²⟨N̂1N̂2⟩`.
pub fn noisy_moments(noiseless: &MomentSet, noise: &NoiseSpec) -> Result<MomentSet> {
    noise.validate()?;
    let eta = noise.efficiency;
    let sigma2 = noise.phase_sigma * noise.phase_sigma;
    let nt = noise.thermal_photons;
    let m = noiseless;

    let cross = m.cross_c * (eta * (-sigma2 / 2.0).exp());
    let pair_avg = m.pair_d * (-2.0 * sigma2).exp();
    let m0_sq = 2.0 * m.mean_n1n2 + m.mean_n1 + m.mean_n2 - 2.0 * pair_avg.re;
    let loss_term = eta * (nt + 1.0 - eta) * m.total_photons();

    Ok(MomentSet {
        mean_n1: eta * m.mean_n1 + nt / 2.0,
        mean_n2: eta * m.mean_n2 + nt / 2.0,
        mean_n1n2: eta * eta * m.mean_n1n2,
        cross_c: cross,
        pair_d: pair_avg * (eta * eta),
        mean_m: 2.0 * cross.im,
        mean_m2: eta * eta * m0_sq + loss_term,
        trunc_loss: m.trunc_loss,
    })
}

/// `|⟨β|e^{i2zN̂}a|β⟩ − β·exp[|β|²(e^{i2z} − 1)]|`, with the left side
/// contracted in a `dim`-level truncated basis.
pub fn verify_displacement(beta: Complex64, z: f64, dim: usize) -> Result<f64> {
    let state = coherent_vector_checked(beta, dim, DEFAULT_TRUNCATION_BUDGET)?;
    let c = &state.amplitudes;
    // a|n+1⟩ = √(n+1)|n⟩, then e^{i2zN̂} gives e^{i2zn}
    let direct: Complex64 = (0..dim.saturating_sub(1))
        .map(|n| c[n].conj() * Complex64::cis(2.0 * z * n as f64) * (n as f64 + 1.0).sqrt() * c[n + 1])
        .sum();
    let closed = beta * (beta.norm_sqr() * (Complex64::cis(2.0 * z) - 1.0)).exp();
    Ok((direct - closed).norm())
}
