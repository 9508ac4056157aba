//! Finite-support probability laws on {0, 1, ..., K}.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on the total mass of a probability vector.
pub const MASS_TOLERANCE: f64 = 1e-12;

pub(crate) fn validate_probs(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution("empty probability vector".into()));
    }
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidDistribution(format!("entry {i} = {p} is not in [0, 1]")));
        }
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::InvalidDistribution(format!("entries sum to {total}, not 1")));
    }
    Ok(())
}

/// Drops trailing zero entries so that the last entry is the largest
/// value with positive mass.
pub(crate) fn trim_trailing_zeros(mut probs: Vec<f64>) -> Vec<f64> {
    while probs.len() > 1 && probs[probs.len() - 1] == 0.0 {
        probs.pop();
    }
    probs
}

/// A validated probability vector `probs[k] = P[X = k]` together with a
/// sampler.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DiscreteLaw {
    probs: Vec<f64>,
    #[serde(skip)]
    sampler: Sampler,
}

#[derive(Debug, Clone, Default)]
enum Sampler {
    #[default]
    Unset,
    Point(u32),
    Weighted(WeightedIndex<f64>),
}

impl DiscreteLaw {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        validate_probs(&probs)?;
        Ok(Self::from_validated(trim_trailing_zeros(probs)))
    }

    pub(crate) fn from_validated(probs: Vec<f64>) -> Self {
        let positive: Vec<usize> = (0..probs.len()).filter(|&k| probs[k] > 0.0).collect();
        let sampler = if positive.len() == 1 {
            Sampler::Point(positive[0] as u32)
        } else {
            Sampler::Weighted(WeightedIndex::new(&probs).expect("validated weights"))
        };
        Self { probs, sampler }
    }

    /// Point mass at `k`.
    pub fn point(k: usize) -> Self {
        let mut probs = vec![0.0; k + 1];
        probs[k] = 1.0;
        Self::from_validated(probs)
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::new(vec![1.0 - p, p])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, k: usize) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    pub fn max_value(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
    }

    /// `Some(k)` if the law is a point mass.
    pub fn as_point(&self) -> Option<u32> {
        match self.sampler {
            Sampler::Point(k) => Some(k),
            _ => None,
        }
    }

    /// Draws one value. Point masses consume no randomness.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        match &self.sampler {
            Sampler::Point(k) => *k,
            Sampler::Weighted(w) => w.sample(rng) as u32,
            Sampler::Unset => unreachable!("sampler is always built on construction"),
        }
    }

    /// The law of `X + shift`.
    pub fn shifted(&self, shift: usize) -> Self {
        let mut probs = vec![0.0; shift];
        probs.extend_from_slice(&self.probs);
        Self::from_validated(probs)
    }
}

impl PartialEq for DiscreteLaw {
    fn eq(&self, other: &Self) -> bool {
        self.probs == other.probs
    }
}

impl TryFrom<Vec<f64>> for DiscreteLaw {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs)
    }
}

impl From<DiscreteLaw> for Vec<f64> {
    fn from(law: DiscreteLaw) -> Self {
        law.probs
    }
}
