//! A heuristic recurrence diagnostic: how root visits grow with the
//! number of rounds.

use serde::{Deserialize, Serialize};

use super::frog::simulate_fm_checkpoints;
use super::{FrogInit, SimConfig, Termination};
use crate::error::{domain, Result};
use crate::gw::{OffspringDistribution, RootedTree};
use crate::rng::mix64;
use crate::stats::{quantile, MeanEstimate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeFamily {
    Regular { degree: u32 },
    GaltonWatson { probs: Vec<f64> },
}

impl TreeFamily {
    /// A fresh tree for replica `seed`.
    pub fn tree(&self, seed: u64) -> Result<RootedTree> {
        match self {
            TreeFamily::Regular { degree } => RootedTree::regular(*degree, 0),
            TreeFamily::GaltonWatson { probs } => {
                let dist = OffspringDistribution::new(probs.clone())?;
                Ok(RootedTree::galton_watson(&dist, seed, 0))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorRow {
    pub step_cap: u64,
    pub nu: MeanEstimate,
    pub q10: f64,
    pub q50: f64,
    pub q90: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceIndicator {
    pub rows: Vec<IndicatorRow>,
    /// Slopes of mean root visits against `ln(step_cap)` between
    /// consecutive caps reached by every replica.
    pub slopes: Vec<f64>,
    /// The last slope exceeds the first by more than two standard errors.
    pub growing: bool,
    /// Replicas stopped by the particle budget before the largest cap.
    pub truncated: usize,
}

/// Runs `replicas` frog models to the largest of `step_caps` and tabulates
/// root visits at each cap. Diagnostic only; it proves nothing.
pub fn recurrence_indicator(
    family: &TreeFamily,
    init: &FrogInit,
    step_caps: &[u64],
    replicas: usize,
    seed: u64,
    particle_cap: u64,
) -> Result<RecurrenceIndicator> {
    let mut caps = step_caps.to_vec();
    caps.sort_unstable();
    caps.dedup();
    if caps.len() < 2 || caps[0] == 0 {
        return Err(domain("need at least two positive step caps"));
    }
    let max_cap = *caps.last().expect("non-empty");
    let cfg = SimConfig { step_cap: max_cap, particle_cap, trajectory_stride: 0 };
    let mut samples: Vec<Vec<f64>> = vec![Vec::new(); caps.len()];
    let mut truncated = 0;
    for i in 0..replicas {
        let s = mix64(seed ^ mix64(i as u64));
        let tree = family.tree(s)?;
        let (report, nu_at) = simulate_fm_checkpoints(&tree, init, s, &cfg, &caps);
        if report.termination == Termination::ParticleCap {
            truncated += 1;
        }
        for (j, &nu) in nu_at.iter().enumerate() {
            samples[j].push(nu as f64);
        }
    }
    let rows: Vec<IndicatorRow> = caps
        .iter()
        .zip(samples.iter_mut())
        .map(|(&step_cap, xs)| {
            xs.sort_by(f64::total_cmp);
            IndicatorRow {
                step_cap,
                nu: MeanEstimate::from_samples(xs),
                q10: quantile(xs, 0.1),
                q50: quantile(xs, 0.5),
                q90: quantile(xs, 0.9),
            }
        })
        .collect();
    let mut slopes = Vec::new();
    let mut slope_se = Vec::new();
    let complete = rows.iter().take_while(|r| r.nu.n == replicas).count();
    for w in rows[..complete].windows(2) {
        let dl = (w[1].step_cap as f64).ln() - (w[0].step_cap as f64).ln();
        slopes.push((w[1].nu.mean - w[0].nu.mean) / dl);
        slope_se.push((w[1].nu.se.powi(2) + w[0].nu.se.powi(2)).sqrt() / dl);
    }
    let growing = slopes.len() >= 2 && {
        let (a, b) = (slopes[0], *slopes.last().expect("non-empty"));
        let se = (slope_se[0].powi(2) + slope_se.last().expect("non-empty").powi(2)).sqrt();
        b - a > 2.0 * se
    };
    Ok(RecurrenceIndicator { rows, slopes, growing, truncated })
}
