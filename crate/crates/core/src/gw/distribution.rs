//! Offspring distributions and their generating-function algebra.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::law::{trim_trailing_zeros, validate_probs, DiscreteLaw};

const BISECTION_TOL: f64 = 1e-15;

/// A Galton-Watson offspring law `p_k`, `k = 0..=d_max`.
///
/// The last stored entry always has positive mass, so `d_max` is the
/// largest possible number of children.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffspringDistribution {
    probs: Vec<f64>,
}

#[derive(Deserialize)]
struct JsonForm {
    probs: Vec<f64>,
}

impl OffspringDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        validate_probs(&probs)?;
        Ok(Self { probs: trim_trailing_zeros(probs) })
    }

    /// Builds a law whose entries are known to sum to one up to rounding
    /// from an upstream computation; rescales away the drift.
    pub(crate) fn renormalized(mut probs: Vec<f64>) -> Self {
        for p in probs.iter_mut() {
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        Self { probs: trim_trailing_zeros(probs) }
    }

    /// Every vertex has exactly `k` children.
    pub fn deterministic(k: usize) -> Self {
        let mut probs = vec![0.0; k + 1];
        probs[k] = 1.0;
        Self { probs }
    }

    /// Parses either `{"probs": [...]}` JSON or a key=value form
    /// (`p0=0.1,p2=0.9` or `probs=0.1,0,0.9`).
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('{') {
            let form: JsonForm = serde_json::from_str(text)?;
            return Self::new(form.probs);
        }
        if let Some(rest) = text.strip_prefix("probs=") {
            let probs = rest
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::InvalidDistribution(format!("bad entry in '{rest}': {e}")))?;
            return Self::new(probs);
        }
        let mut probs = Vec::new();
        for item in text.split([',', ' ', '\n']).filter(|s| !s.trim().is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidDistribution(format!("expected pK=value, got '{item}'")))?;
            let k: usize = key
                .trim()
                .strip_prefix('p')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::InvalidDistribution(format!("bad key '{key}'")))?;
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|e| Error::InvalidDistribution(format!("bad value '{value}': {e}")))?;
            if probs.len() <= k {
                probs.resize(k + 1, 0.0);
            }
            probs[k] += v;
        }
        Self::new(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn p(&self, k: usize) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    pub fn d_max(&self) -> usize {
        self.probs.len() - 1
    }

    /// Smallest offspring count `>= 2` with positive mass.
    pub fn d_min(&self) -> Option<usize> {
        (2..self.probs.len()).find(|&k| self.probs[k] > 0.0)
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
    }

    pub fn law(&self) -> DiscreteLaw {
        DiscreteLaw::from_validated(self.probs.clone())
    }

    /// `Some(k)` if every vertex has exactly `k` children.
    pub fn deterministic_count(&self) -> Option<usize> {
        let positive: Vec<usize> = (0..self.probs.len()).filter(|&k| self.probs[k] > 0.0).collect();
        (positive.len() == 1).then(|| positive[0])
    }

    fn check_unit(r: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&r) {
            return Err(domain(format!("argument {r} outside [0, 1]")));
        }
        Ok(())
    }

    /// `f(r) = sum_k p_k r^k`.
    pub fn pgf(&self, r: f64) -> Result<f64> {
        Self::check_unit(r)?;
        Ok(self.pgf_unchecked(r))
    }

    pub(crate) fn pgf_unchecked(&self, r: f64) -> f64 {
        self.probs.iter().rev().fold(0.0, |acc, &p| acc * r + p)
    }

    /// `f'(r)`.
    pub fn pgf_derivative(&self, r: f64) -> Result<f64> {
        Self::check_unit(r)?;
        Ok(self.derivative_unchecked(r))
    }

    fn derivative_unchecked(&self, r: f64) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, &p)| acc * r + k as f64 * p)
    }

    /// Smallest fixed point of `f` in `[0, 1]`.
    pub fn extinction_prob(&self) -> f64 {
        if self.p(0) == 0.0 {
            return 0.0;
        }
        if self.mean() <= 1.0 {
            return 1.0;
        }
        // f' is increasing; locate where it crosses 1, below which f(r) - r
        // changes sign exactly once.
        let (mut lo, mut hi) = (0.0, 1.0);
        while hi - lo > BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            if self.derivative_unchecked(mid) < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (mut lo, mut hi) = (0.0, lo);
        while hi - lo > BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            if self.pgf_unchecked(mid) - mid > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Offspring law of the backbone (vertices with an infinite line of
    /// descent), whose generating function is
    /// `(f(q + (1 - q) s) - q) / (1 - q)`.
    pub fn backbone(&self) -> Result<OffspringDistribution> {
        let q = self.extinction_prob();
        if q >= 1.0 {
            return Err(Error::NoBackbone);
        }
        if q == 0.0 {
            return Ok(self.clone());
        }
        let n = self.d_max();
        let mut coeffs = vec![0.0; n + 1];
        // coeff_j = (1-q)^{j-1} sum_{k>=j} p_k C(k, j) q^{k-j}
        for (j, c) in coeffs.iter_mut().enumerate().skip(1) {
            let mut binom = 1.0;
            let mut sum = 0.0;
            for k in j..=n {
                if k > j {
                    binom *= k as f64 / (k - j) as f64;
                }
                sum += self.probs[k] * binom * q.powi((k - j) as i32);
            }
            *c = sum * (1.0 - q).powi(j as i32 - 1);
        }
        Ok(Self::renormalized(coeffs))
    }

    /// Offspring law of a bush (a tree conditioned to die out), with
    /// generating function `f(q s) / q`.
    pub fn bush(&self) -> Result<OffspringDistribution> {
        let q = self.extinction_prob();
        if q == 0.0 {
            return Err(Error::NoBushes);
        }
        let coeffs = self
            .probs
            .iter()
            .enumerate()
            .map(|(k, &p)| p * q.powi(k as i32 - 1))
            .collect();
        Ok(Self::renormalized(coeffs))
    }

    /// `f*(s)` evaluated directly from `f`.
    pub fn backbone_pgf(&self, s: f64) -> Result<f64> {
        Self::check_unit(s)?;
        let q = self.extinction_prob();
        if q >= 1.0 {
            return Err(Error::NoBackbone);
        }
        Ok((self.pgf_unchecked(q + (1.0 - q) * s) - q) / (1.0 - q))
    }

    /// `f~(s)` evaluated directly from `f`.
    pub fn bush_pgf(&self, s: f64) -> Result<f64> {
        Self::check_unit(s)?;
        let q = self.extinction_prob();
        if q == 0.0 {
            return Err(Error::NoBushes);
        }
        Ok(self.pgf_unchecked(q * s) / q)
    }

    /// Expected total size of a bush, `1 / (1 - f'(q))`.
    pub fn expected_bush_size(&self) -> Result<f64> {
        let q = self.extinction_prob();
        if q == 0.0 {
            return Err(Error::NoBushes);
        }
        let slope = self.derivative_unchecked(q);
        if slope >= 1.0 {
            return Err(domain(format!("f'(q) = {slope} is not below 1")));
        }
        Ok(1.0 / (1.0 - slope))
    }

    /// The law `p_k / (1 - p_1)` on `k != 1`.
    pub fn without_ones(&self) -> Result<OffspringDistribution> {
        let p1 = self.p(1);
        if p1 >= 1.0 {
            return Err(domain("p_1 = 1 leaves no mass off one child"));
        }
        let mut probs = self.probs.clone();
        if probs.len() > 1 {
            probs[1] = 0.0;
        }
        Ok(Self::renormalized(probs))
    }
}

impl fmt::Display for OffspringDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.probs.iter().map(|p| p.to_string()).collect();
        write!(f, "probs={}", parts.join(","))
    }
}

impl FromStr for OffspringDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        let a = OffspringDistribution::parse(r#"{"probs":[0.25,0,0.75]}"#).unwrap();
        let b = OffspringDistribution::parse("p0=0.25,p2=0.75").unwrap();
        let c = OffspringDistribution::parse("probs=0.25,0,0.75").unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(a.to_string().parse::<OffspringDistribution>().unwrap(), a);
        assert!(OffspringDistribution::parse("p0=0.5,p1=0.6").is_err());
        assert!(OffspringDistribution::parse("q0=1").is_err());
    }

    #[test]
    fn pgf_domain() {
        let d = OffspringDistribution::deterministic(2);
        assert!(d.pgf(1.5).is_err());
        assert!((d.pgf(0.5).unwrap() - 0.25).abs() < 1e-15);
        assert!((d.pgf_derivative(0.5).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn extinction_binary_with_death() {
        // f(r) = 1/4 + 3/4 r^2 has fixed points 1/3 and 1.
        let d = OffspringDistribution::new(vec![0.25, 0.0, 0.75]).unwrap();
        assert!((d.extinction_prob() - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn degenerate_extinction_cases() {
        assert_eq!(OffspringDistribution::deterministic(1).extinction_prob(), 0.0);
        assert_eq!(OffspringDistribution::new(vec![0.5, 0.5]).unwrap().extinction_prob(), 1.0);
        assert_eq!(OffspringDistribution::new(vec![0.5, 0.0, 0.5]).unwrap().extinction_prob(), 1.0);
    }

    #[test]
    fn backbone_and_bush_without_death() {
        let d = OffspringDistribution::new(vec![0.0, 0.3, 0.7]).unwrap();
        assert_eq!(d.backbone().unwrap(), d);
        assert!(matches!(d.bush(), Err(Error::NoBushes)));
        assert!(matches!(d.expected_bush_size(), Err(Error::NoBushes)));
    }

    #[test]
    fn subcritical_has_no_backbone() {
        let d = OffspringDistribution::new(vec![0.6, 0.2, 0.2]).unwrap();
        assert!(matches!(d.backbone(), Err(Error::NoBackbone)));
        assert!((d.expected_bush_size().unwrap() - 1.0 / (1.0 - 0.6)).abs() < 1e-12);
    }

    #[test]
    fn without_ones_rescales() {
        let d = OffspringDistribution::new(vec![0.1, 0.5, 0.4]).unwrap();
        let h = d.without_ones().unwrap();
        assert!((h.p(0) - 0.2).abs() < 1e-15);
        assert_eq!(h.p(1), 0.0);
        assert!((h.p(2) - 0.8).abs() < 1e-15);
    }
}
