//! Rayleigh power fading and Monte Carlo expectation of received power.
//!
//! The fading factor `h` is unit-mean exponential, drawn by inverse CDF as
//! `h = -ln(u)` with `u` uniform on (0, 1]. Uniforms come from a ChaCha20
//! keystream: the 32-byte key is the little-endian seed followed by zeros,
//! the 64-bit stream id selects an independent sequence, and each sample
//! consumes one little-endian `u64` word pair. Sweeps give every grid point
//! its own stream, so results never depend on scheduling.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::linkbudget::{conventional_rx_power, RadioConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingMode {
    /// Fixed power factor.
    Deterministic { h: f64 },
    /// `h ~ Exp(1)`.
    RayleighUnitMean,
}

impl Default for FadingMode {
    fn default() -> Self {
        FadingMode::Deterministic { h: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingSpec {
    pub mode: FadingMode,
    /// Path-loss exponent, at least 1.
    pub alpha: f64,
    pub seed: u64,
}

impl FadingSpec {
    pub fn validate(&self) -> Result<()> {
        if let FadingMode::Deterministic { h } = self.mode {
            if !(h >= 0.0 && h.is_finite()) {
                return Err(Error::domain("fading.h", h, "must be non-negative and finite"));
            }
        }
        if !(self.alpha >= 1.0 && self.alpha.is_finite()) {
            return Err(Error::domain("fading.alpha", self.alpha, "must be at least 1"));
        }
        Ok(())
    }

    /// The power factor used when no Monte Carlo averaging is requested:
    /// the fixed `h`, or the Rayleigh mean of 1.
    pub fn deterministic_h(&self) -> f64 {
        match self.mode {
            FadingMode::Deterministic { h } => h,
            FadingMode::RayleighUnitMean => 1.0,
        }
    }
}

/// Maps a uniform draw in (0, 1] to an exponential power factor.
pub fn h_from_uniform(u: f64) -> f64 {
    -u.ln()
}

/// Top 53 bits of `word`, shifted into (0, 1]. Never returns 0.
fn unit_interval_open_closed(word: u64) -> f64 {
    ((word >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seeded source of exponential power factors.
#[derive(Debug, Clone)]
pub struct FadingSampler {
    seed: u64,
    stream: u64,
    position: u64,
    rng: ChaCha20Rng,
}

impl FadingSampler {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Independent sequence `stream` under `seed`; sweeps pass the point index.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut rng = ChaCha20Rng::from_seed(key);
        rng.set_stream(stream);
        FadingSampler {
            seed,
            stream,
            position: 0,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Number of samples drawn so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn sample_h(&mut self) -> f64 {
        self.position += 1;
        h_from_uniform(unit_interval_open_closed(self.rng.next_u64()))
    }
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean_w: f64,
    /// Unbiased sample standard deviation over `√n`; 0 when `n = 1`.
    pub std_error_w: f64,
    pub n_samples: u64,
}

/// Estimates `E[P_r]` over Rayleigh fading using stream 0 of `seed`.
pub fn expected_conventional_power(
    cfg: &RadioConfig,
    d: f64,
    alpha: f64,
    n: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    estimate_conventional_power(cfg, d, alpha, n, &mut FadingSampler::new(seed))
}

/// Same as [`expected_conventional_power`], drawing from a caller-owned sampler.
pub fn estimate_conventional_power(
    cfg: &RadioConfig,
    d: f64,
    alpha: f64,
    n: u64,
    sampler: &mut FadingSampler,
) -> Result<MonteCarloEstimate> {
    if n == 0 {
        return Err(Error::domain("monte_carlo_n", 0.0, "must be at least 1"));
    }
    // Surface domain errors before drawing anything.
    conventional_rx_power(cfg, d, 1.0, alpha)?;

    // Welford accumulation over the drawn powers.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 1..=n {
        let p = conventional_rx_power(cfg, d, sampler.sample_h(), alpha)?;
        let delta = p - mean;
        mean += delta / k as f64;
        m2 += delta * (p - mean);
    }
    let std_error_w = if n > 1 {
        (m2 / (n - 1) as f64).sqrt() / (n as f64).sqrt()
    } else {
        0.0
    };
    Ok(MonteCarloEstimate {
        mean_w: mean,
        std_error_w,
        n_samples: n,
    })
}
