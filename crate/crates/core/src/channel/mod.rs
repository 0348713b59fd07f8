//! Channel, symbol and noise sampling for the real-valued block-fading model
//! `Y = A X + N`, plus the equivalence and determinant tools built on it.

mod atm;
mod msp;
mod spectrum;

use std::fmt;
use std::str::FromStr;

pub use atm::{atm_equivalent, Atm};
pub use msp::{has_msp, MspCheck, EXHAUSTIVE_SUBSET_LIMIT};
pub use spectrum::{max_det, neighbor_det_signature, spectrum, witness, WITNESS_SIZES};

use crate::matrix::{log_abs_det, Matrix};
use crate::rng::Rng;

/// Scale that gives a Rayleigh variate unit variance: `Var = (2 - pi/2) s^2`.
pub fn rayleigh_unit_variance_scale() -> f64 {
    1.0 / (2.0 - std::f64::consts::FRAC_PI_2).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelDistribution {
    #[default]
    Gaussian,
    Rayleigh,
}

impl fmt::Display for ChannelDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Gaussian => "gaussian",
            Self::Rayleigh => "rayleigh",
        })
    }
}

impl FromStr for ChannelDistribution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(Self::Gaussian),
            "rayleigh" => Ok(Self::Rayleigh),
            other => Err(format!("unknown channel distribution '{other}'")),
        }
    }
}

/// Draws an `n x n` channel gain matrix, resampling until it is nonsingular.
pub fn draw_channel(n: usize, dist: ChannelDistribution, rng: &mut Rng) -> Matrix {
    assert!(n >= 1);
    let scale = rayleigh_unit_variance_scale();
    loop {
        let a = Matrix::from_fn(n, n, |_, _| match dist {
            ChannelDistribution::Gaussian => rng.gaussian(),
            ChannelDistribution::Rayleigh => {
                // Inverse CDF; 1 - u lies in (0, 1] so the log is finite.
                scale * (-2.0 * (1.0 - rng.uniform()).ln()).sqrt()
            }
        });
        if log_abs_det(&a).is_some() {
            return a;
        }
    }
}

/// Uniform BPSK block in `{-1, +1}^{n x k}`.
pub fn draw_symbols(n: usize, k: usize, rng: &mut Rng) -> Matrix {
    Matrix::from_fn(n, k, |_, _| rng.sign())
}

/// `A X + N` with `N` i.i.d. `N(0, sigma^2)`. No noise is drawn when
/// `sigma == 0`, so the result is exactly `A X`.
pub fn observe(a: &Matrix, x: &Matrix, sigma: f64, rng: &mut Rng) -> Matrix {
    assert!(sigma >= 0.0 && sigma.is_finite(), "noise level must be finite and non-negative");
    let mut y = a.matmul(x);
    if sigma > 0.0 {
        for i in 0..y.rows() {
            for v in y.row_mut(i) {
                *v += sigma * rng.gaussian();
            }
        }
    }
    y
}

/// Noise standard deviation for a given per-antenna SNR.
///
/// SNR is `E||A x||^2 / (n sigma^2)` with `x` uniform over `{-1,+1}^n`,
/// and that expectation is `||A||_F^2`.
pub fn sigma_for_snr(a: &Matrix, snr_db: f64) -> f64 {
    let n = a.rows() as f64;
    let power = a.frobenius().powi(2);
    (power / (n * 10f64.powf(snr_db / 10.0))).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseLevel {
    Sigma(f64),
    SnrDb(f64),
}

/// One sampled transmission block together with the generator that drew it.
#[derive(Debug, Clone)]
pub struct ChannelInstance {
    pub n: usize,
    pub k: usize,
    pub a: Matrix,
    pub x: Matrix,
    pub sigma: f64,
    pub y: Matrix,
    pub seed: u64,
    pub stream: u64,
}

impl ChannelInstance {
    pub fn sample(n: usize, k: usize, dist: ChannelDistribution, noise: NoiseLevel, rng: &mut Rng) -> Self {
        let (seed, stream) = (rng.seed(), rng.stream());
        let a = draw_channel(n, dist, rng);
        let x = draw_symbols(n, k, rng);
        let sigma = match noise {
            NoiseLevel::Sigma(s) => s,
            NoiseLevel::SnrDb(db) => sigma_for_snr(&a, db),
        };
        let y = observe(&a, &x, sigma, rng);
        Self { n, k, a, x, sigma, y, seed, stream }
    }
}
