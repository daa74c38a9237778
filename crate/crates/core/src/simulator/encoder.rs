//! Stand-in for the text-side encoder that maps identity embeddings into
//! the generator's latent space: `S(x) = φ(W x + b)`.
//!
//! `W` is `sqrt(dim)` times a random orthogonal matrix, so components of
//! `W x` are O(1) for unit `x` and the saturating `φ = tanh` bends them
//! noticeably. A linear `S` would make lerp commute with encoding and the
//! two interpolation locations could not be told apart.

use super::frs::Dense;
use super::rng::Stream;

/// Standard deviation of the seeded bias components.
pub const BIAS_SIGMA: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nonlinearity {
    Tanh,
    Linear,
}

impl Nonlinearity {
    fn apply(self, x: f64) -> f64 {
        match self {
            Nonlinearity::Tanh => libm::tanh(x),
            Nonlinearity::Linear => x,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncoderSurrogate {
    pub weight: Dense,
    pub bias: Vec<f64>,
    pub nonlinearity: Nonlinearity,
}

impl EncoderSurrogate {
    pub fn seeded(seed: u64, dim: usize) -> Self {
        let mut w =
            Dense::random_orthonormal(dim, dim, &mut Stream::new(seed, "encoder-weight", 0));
        let gain = (dim as f64).sqrt();
        w.data.iter_mut().for_each(|x| *x *= gain);
        let bias = Stream::new(seed, "encoder-bias", 0)
            .gaussians(dim)
            .into_iter()
            .map(|g| BIAS_SIGMA * g)
            .collect();
        Self {
            weight: w,
            bias,
            nonlinearity: Nonlinearity::Tanh,
        }
    }

    /// `S(x) = x`.
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Self {
            weight: Dense {
                rows: dim,
                cols: dim,
                data,
            },
            bias: vec![0.0; dim],
            nonlinearity: Nonlinearity::Linear,
        }
    }

    pub fn encode(&self, x: &[f64]) -> Vec<f64> {
        self.weight
            .apply(x)
            .into_iter()
            .zip(&self.bias)
            .map(|(v, b)| self.nonlinearity.apply(v + b))
            .collect()
    }
}
