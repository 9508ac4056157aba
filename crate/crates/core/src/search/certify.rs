//! Searching for the largest certified mean frog density.

use serde::{Deserialize, Serialize};

use super::conditions::{
    check_mixed, check_n_feasible, check_type2, check_type3, check_type3_bush, gamma_for_eta, max_feasible_n,
    mu_ceiling, stretch_angle,
};
use crate::error::{domain, Error, Result};
use crate::gw::OffspringDistribution;

/// Search parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchCaps {
    /// Largest truncation length tried.
    pub n_cap: usize,
    /// Largest `k` in the mixed-type comparison.
    pub k_max: usize,
    /// Relative margin below the angle of the spectral ceiling used to pick
    /// `mu`.
    pub epsilon: f64,
    pub bisection_steps: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        Self { n_cap: 50, k_max: 64, epsilon: 1e-4, bisection_steps: 60 }
    }
}

/// Which branching number enters the spectral conditions for trees with
/// bushes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DminRule {
    /// Smallest branching number of the backbone law.
    #[default]
    Backbone,
    /// Smallest branching number of the original law.
    Original,
}

/// Flags for the five conditions, in order: density below offspring mean,
/// offspring mean above the branching floor, stretch comparisons,
/// mixed-type comparison, offspring mean below the spectral ceiling.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionFlags(pub [bool; 5]);

impl ConditionFlags {
    pub fn all(&self) -> bool {
        self.0.iter().all(|&c| c)
    }
}

/// Bush quantities used by the certification of trees with finite
/// subtrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BushParams {
    pub extinction: f64,
    pub expected_bush_size: f64,
    pub max_children: usize,
    /// Probability that a backbone vertex has one backbone child.
    pub p_hat1: f64,
    /// `E[G] (K - 1)`: multiplies the frog density.
    pub density_factor: f64,
}

/// A certified choice of truncation length, frog density and offspring
/// mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub p1: f64,
    pub p0: f64,
    /// Branching number used in the spectral conditions.
    pub d_min: usize,
    pub n: usize,
    pub eta_bar: f64,
    pub mu_bar: f64,
    pub conditions: ConditionFlags,
    pub k_max_checked: usize,
    /// The simplified sufficient form of the mixed-type comparison also
    /// holds at the certified point.
    pub reduced_mixed_holds: bool,
    pub bush: Option<BushParams>,
}

struct Problem {
    p: f64,
    d: usize,
    factor: f64,
    bush: bool,
}

impl Problem {
    fn mu(&self, n: usize, caps: &SearchCaps) -> f64 {
        1.0 / (stretch_angle(self.d) / (n as f64 + 1.0) * (1.0 - caps.epsilon)).cos()
    }

    fn flags(&self, n: usize, eta: f64, mu: f64, k_max: usize) -> Result<(ConditionFlags, bool)> {
        let e = self.factor * eta;
        let c1 = 1.0 + e < mu;
        let c2 = (self.d as f64 + 1.0) / self.d as f64 <= mu;
        let c5 = mu < mu_ceiling(self.d, n);
        let mut c3 = check_type2(n, gamma_for_eta(e, n))? && check_type3(self.p, n, e, mu)?;
        if self.bush {
            c3 = c3 && check_type3_bush(self.p, n, e, mu)?;
        }
        // The mixed check is the expensive one.
        let (c4, reduced) = if c1 && c3 {
            let m = check_mixed(self.p, n, e, mu, k_max)?;
            (m.holds, m.reduced_holds)
        } else {
            (false, false)
        };
        Ok((ConditionFlags([c1, c2, c3, c4, c5]), reduced))
    }

    /// Largest `eta` (by bisection) with every condition satisfied at `n`.
    fn best_eta(&self, n: usize, caps: &SearchCaps) -> Result<Option<f64>> {
        let mu = self.mu(n, caps);
        if !self.flags(n, 0.0, mu, caps.k_max)?.0.all() {
            return Ok(None);
        }
        let (mut lo, mut hi) = (0.0, (mu - 1.0) / self.factor);
        for _ in 0..caps.bisection_steps {
            let mid = 0.5 * (lo + hi);
            if self.flags(n, mid, mu, caps.k_max)?.0.all() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((lo > 0.0).then_some(lo))
    }

    fn certify(&self, caps: &SearchCaps, p0: f64, p1: f64, bush: Option<BushParams>) -> Result<Option<SearchRecord>> {
        let n_max = max_feasible_n(self.d).min(caps.n_cap);
        let mut best: Option<(usize, f64)> = None;
        for n in 1..=n_max {
            if !check_n_feasible(self.d, n) {
                continue;
            }
            if let Some(eta) = self.best_eta(n, caps)? {
                if best.is_none_or(|(_, b)| eta > b) {
                    best = Some((n, eta));
                }
            }
        }
        let Some((n, eta)) = best else { return Ok(None) };
        let mu = self.mu(n, caps);
        let (conditions, reduced) = self.flags(n, eta, mu, caps.k_max)?;
        if !conditions.all() {
            return Err(domain(format!("certificate at N = {n}, eta = {eta} failed its re-check")));
        }
        Ok(Some(SearchRecord {
            p1,
            p0,
            d_min: self.d,
            n,
            eta_bar: eta,
            mu_bar: mu,
            conditions,
            k_max_checked: caps.k_max,
            reduced_mixed_holds: reduced,
            bush,
        }))
    }
}

/// Certifies trees without leaves whose one-child probability is `p1` and
/// whose smallest branching number is `d_min`. Returns the truncation
/// length with the largest certified density (smallest on ties).
pub fn certify_stretch_case(p1: f64, d_min: usize, caps: &SearchCaps) -> Result<Option<SearchRecord>> {
    if !(p1 > 0.0 && p1 < 1.0) {
        return Err(domain(format!("p1 = {p1} must lie in (0, 1)")));
    }
    if d_min < 2 {
        return Err(domain("d_min must be at least 2"));
    }
    Problem { p: p1, d: d_min, factor: 1.0, bush: false }.certify(caps, 0.0, p1, None)
}

/// Certification in which the frog density enters every condition
/// multiplied by `density_factor`, with the bush form of the stretch
/// comparison. The certified density scales exactly as `1 / density_factor`.
pub fn certify_with_density_factor(
    p_hat1: f64,
    d_min: usize,
    density_factor: f64,
    caps: &SearchCaps,
) -> Result<Option<SearchRecord>> {
    if !(0.0..1.0).contains(&p_hat1) {
        return Err(domain(format!("p_hat1 = {p_hat1} must lie in [0, 1)")));
    }
    if d_min < 2 {
        return Err(domain("d_min must be at least 2"));
    }
    if !(density_factor > 0.0) {
        return Err(domain("bush density factor must be positive"));
    }
    Problem { p: p_hat1, d: d_min, factor: density_factor, bush: true }.certify(caps, 0.0, p_hat1, None)
}

/// Certifies a supercritical law with possible leaves: frogs on bushes are
/// moved to the backbone, multiplying the density by `E[G] (K - 1)`.
pub fn certify_bush_case(
    dist: &OffspringDistribution,
    caps: &SearchCaps,
    rule: DminRule,
) -> Result<Option<SearchRecord>> {
    let q = dist.extinction_prob();
    if q >= 1.0 {
        return Err(Error::NoBackbone);
    }
    if dist.p(0) == 0.0 {
        let d = dist.d_min().ok_or_else(|| domain("law has no branching"))?;
        return certify_stretch_case(dist.p(1), d, caps);
    }
    let backbone = dist.backbone()?;
    let d = match rule {
        DminRule::Backbone => backbone.d_min(),
        DminRule::Original => dist.d_min(),
    }
    .ok_or_else(|| domain("law has no branching"))?;
    let expected_bush_size = dist.expected_bush_size()?;
    let max_children = dist.d_max();
    let p_hat1 = backbone.p(1);
    let params = BushParams {
        extinction: q,
        expected_bush_size,
        max_children,
        p_hat1,
        density_factor: expected_bush_size * (max_children as f64 - 1.0),
    };
    Ok(certify_with_density_factor(p_hat1, d, params.density_factor, caps)?.map(|r| SearchRecord {
        p0: dist.p(0),
        p1: dist.p(1),
        bush: Some(params),
        ..r
    }))
}
