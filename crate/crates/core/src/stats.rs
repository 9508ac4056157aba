//! Small summary-statistics helpers for Monte Carlo output.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub se: f64,
    pub n: usize,
}

impl MeanEstimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self { mean: f64::NAN, se: f64::NAN, n };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let se = if n > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            f64::NAN
        };
        Self { mean, se, n }
    }

    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn covers(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.se
    }
}

/// Empirical quantile by linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Pearson chi-square goodness-of-fit p-value. Cells with expected count
/// below 5 are pooled into the last cell.
pub fn chi_square_p_value(observed: &[u64], expected_probs: &[f64]) -> f64 {
    let total: u64 = observed.iter().sum();
    let total = total as f64;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut pooled_o, mut pooled_e) = (0.0, 0.0);
    for (i, &p) in expected_probs.iter().enumerate() {
        let o = observed.get(i).copied().unwrap_or(0) as f64;
        let e = p * total;
        if e >= 5.0 {
            cells.push((o, e));
        } else {
            pooled_o += o;
            pooled_e += e;
        }
    }
    let beyond: u64 = observed.iter().skip(expected_probs.len()).sum();
    pooled_o += beyond as f64;
    if pooled_e > 0.0 {
        cells.push((pooled_o, pooled_e));
    }
    if cells.len() < 2 {
        return 1.0;
    }
    let stat: f64 = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dist = ChiSquared::new((cells.len() - 1) as f64).expect("positive degrees of freedom");
    1.0 - dist.cdf(stat)
}

/// Chi-square test of homogeneity for two samples of counts over the same
/// cells. Cells empty in both samples are skipped.
pub fn chi_square_two_sample_p_value(a: &[u64], b: &[u64]) -> f64 {
    let len = a.len().max(b.len());
    let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0) as f64;
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let mut stat = 0.0;
    let mut cells = 0usize;
    for i in 0..len {
        let (x, y) = (get(a, i), get(b, i));
        let total = x + y;
        if total == 0.0 {
            continue;
        }
        cells += 1;
        let ea = total * na / (na + nb);
        let eb = total * nb / (na + nb);
        stat += (x - ea).powi(2) / ea + (y - eb).powi(2) / eb;
    }
    if cells < 2 {
        return 1.0;
    }
    let dist = ChiSquared::new((cells - 1) as f64).expect("positive degrees of freedom");
    1.0 - dist.cdf(stat)
}
