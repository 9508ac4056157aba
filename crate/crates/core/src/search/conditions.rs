//! The individual inequalities a dominating branching chain must satisfy.
//!
//! Notation: `d` is the smallest branching number `>= 2`, `N` the length
//! stretches are truncated to, `eta` the mean number of sleeping frogs per
//! vertex, `mu` the mean offspring of the dominating chain and `p` the
//! probability of exactly one child.

use crate::analytics::RuinChain;
use crate::error::{domain, Result};

/// Largest `eta` for which trees without stretches or bushes are handled
/// directly: `(d + 1) / (2 sqrt d) - 1`.
pub fn eta_bound_no_stretch(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(domain("d must be at least 2"));
    }
    let d = d as f64;
    Ok((d + 1.0) / (2.0 * d.sqrt()) - 1.0)
}

/// `arccos(2 sqrt d / (d + 1))`, the angle of the spectral radius of the
/// `(d+1)`-regular tree.
pub fn stretch_angle(d: usize) -> f64 {
    let d = d as f64;
    (2.0 * d.sqrt() / (d + 1.0)).acos()
}

/// `stretch_angle(d) / arccos(d / (d + 1))`; truncation length `N` is
/// admissible when `N + 1` is below this ratio.
pub fn truncation_ratio(d: usize) -> f64 {
    let df = d as f64;
    stretch_angle(d) / (df / (df + 1.0)).acos()
}

/// Whether some `mu` can satisfy both `(d + 1) / d <= mu` and
/// `mu < mu_ceiling(d, n)`.
pub fn check_n_feasible(d: usize, n: usize) -> bool {
    d >= 2 && n >= 1 && ((n + 1) as f64) < truncation_ratio(d)
}

/// Largest admissible truncation length for `d` (0 if none).
pub fn max_feasible_n(d: usize) -> usize {
    if d < 2 {
        return 0;
    }
    let r = truncation_ratio(d);
    let mut n = (r.ceil() as usize).saturating_sub(2);
    while n > 0 && !check_n_feasible(d, n) {
        n -= 1;
    }
    while check_n_feasible(d, n + 1) {
        n += 1;
    }
    n
}

/// `1 / cos(stretch_angle(d) / (N + 1))`: the reciprocal spectral radius of
/// the tree with stretches truncated to length `N`.
pub fn mu_ceiling(d: usize, n: usize) -> f64 {
    1.0 / (stretch_angle(d) / (n as f64 + 1.0)).cos()
}

/// `(N + 1) arccos(1 / (1 + eta))`, the angle parameter matching `eta`.
pub fn gamma_for_eta(eta: f64, n: usize) -> f64 {
    (n as f64 + 1.0) * (1.0 / (1.0 + eta)).acos()
}

/// `(1/2)(1 / cos(gamma/(N+1)) - 1) <= (N/3)(gamma/(N+1))^2`.
pub fn check_type2(n: usize, gamma: f64) -> Result<bool> {
    let theta = gamma / (n as f64 + 1.0);
    if n < 1 || !(gamma >= 0.0) || theta >= std::f64::consts::FRAC_PI_2 {
        return Err(domain(format!("gamma = {gamma} outside the admissible range for N = {n}")));
    }
    Ok(0.5 * (1.0 / theta.cos() - 1.0) <= n as f64 / 3.0 * theta * theta)
}

/// `sum_{l >= 1} l/(l+1) p^{l-1} (1-p)`: mean fraction of a stretch's
/// frogs that leave by its near end.
pub fn stretch_series(p: f64) -> f64 {
    if p <= 0.0 {
        return 0.5;
    }
    let mut total = 0.0;
    let mut w = 1.0 - p;
    let mut l = 1.0;
    while w > 1e-18 {
        total += l / (l + 1.0) * w;
        w *= p;
        l += 1.0;
    }
    total
}

/// `g(l) = F_l(1, 0 | mu)`, with `g(1) = 0`.
fn g(l: usize, mu: f64) -> Result<f64> {
    if l <= 1 {
        return Ok(0.0);
    }
    RuinChain::new(l, mu)?.first_visit(1, 0)
}

/// `sum_{l=1}^{N-1} g(l+1) p^{l-1} (1-p) + tail`, where the tail is
/// `g(N+1) p^{N-1}` (or `g(N) p^N` for the bush variant).
fn returns_side(p: f64, n: usize, mu: f64, bush: bool) -> Result<f64> {
    let mut total = 0.0;
    for l in 1..n {
        total += g(l + 1, mu)? * p.powi(l as i32 - 1) * (1.0 - p);
    }
    total += if bush { g(n, mu)? * p.powi(n as i32) } else { g(n + 1, mu)? * p.powi(n as i32 - 1) };
    Ok(total)
}

fn check_mu(n: usize, mu: f64) -> Result<()> {
    if !(mu >= 1.0) {
        return Err(domain(format!("mu = {mu} must be at least 1")));
    }
    if n < 1 {
        return Err(domain("N must be at least 1"));
    }
    RuinChain::new(n + 1, mu).map(|_| ())
}

/// `eta / (2(1-p)) + stretch_series(p) < sum_{l=1}^{N-1} g(l+1) p^{l-1}(1-p) + g(N+1) p^{N-1}`.
pub fn check_type3(p: f64, n: usize, eta: f64, mu: f64) -> Result<bool> {
    if !(0.0..1.0).contains(&p) || !(eta >= 0.0) {
        return Err(domain(format!("need p in [0, 1) and eta >= 0, got p = {p}, eta = {eta}")));
    }
    check_mu(n, mu)?;
    Ok(eta / (2.0 * (1.0 - p)) + stretch_series(p) < returns_side(p, n, mu, false)?)
}

/// Variant for trees with bushes, where `eta_eff` already includes the
/// mean bush mass: `(eta_eff/2)(1/(1-p) + 1) + stretch_series(p) <
/// sum_{l=1}^{N-1} g(l+1) p^{l-1}(1-p) + g(N) p^N`.
pub fn check_type3_bush(p: f64, n: usize, eta_eff: f64, mu: f64) -> Result<bool> {
    if !(0.0..1.0).contains(&p) || !(eta_eff >= 0.0) {
        return Err(domain(format!("need p in [0, 1) and eta >= 0, got p = {p}, eta = {eta_eff}")));
    }
    check_mu(n, mu)?;
    let lhs = eta_eff / 2.0 * (1.0 / (1.0 - p) + 1.0) + stretch_series(p);
    Ok(lhs < returns_side(p, n, mu, true)?)
}

/// Outcome of the mixed-type comparison over `k = 1..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedCheck {
    /// The full inequality holds for every checked `k`.
    pub holds: bool,
    pub first_failing_k: Option<usize>,
    pub per_k: Vec<bool>,
    /// The simplified sufficient inequality holds for every checked `k`.
    pub reduced_holds: bool,
    /// The `l < N` part of the left side equals the matching right-side part.
    pub identity_ok: bool,
    /// The `l >= N` part of the left side is below `N p^{N-1} / (N+1)^{2k+1}`.
    pub tail_bound_ok: bool,
    /// Holding at `k = 1` and `k = k_max` implied holding in between.
    pub k_monotone_ok: bool,
}

/// Checks, for each `k <= k_max`, the inequality
///
/// ```text
/// (eta/2) sum_{l>=1} p^{l-1}(1-p) / (l+1)^{2k-1}
///   + sum_{l>=1} l/(l+1) (l+1)^{-2k} p^{l-1}(1-p)
/// <= sum_{l<N} l/(l+1) (l+1)^{-2k} (1 + (1+2l) phi^2/6) p^{l-1}(1-p)
///   + N/(N+1) (N+1)^{-2k} (1 + (1+2N) phi^2/6) p^{N-1}
/// ```
///
/// with `phi = arccos(1/mu)`. All terms are scaled by `(N+1)^{2k}`.
pub fn check_mixed(p: f64, n: usize, eta: f64, mu: f64, k_max: usize) -> Result<MixedCheck> {
    if !(0.0..1.0).contains(&p) || !(eta >= 0.0) || n < 1 || k_max < 1 || !(mu >= 1.0) {
        return Err(domain(format!(
            "invalid arguments p = {p}, N = {n}, eta = {eta}, mu = {mu}, k_max = {k_max}"
        )));
    }
    let phi = (1.0 / mu).acos();
    let phi2_6 = phi * phi / 6.0;
    let nf = n as f64;
    let mut per_k = Vec::with_capacity(k_max);
    let mut reduced_holds = true;
    let mut identity_ok = true;
    let mut tail_bound_ok = true;
    for k in 1..=k_max {
        let two_k = 2 * k as i32;
        let scale = |l: usize| ((nf + 1.0) / (l as f64 + 1.0)).powi(two_k);
        let (mut e1, mut e2, mut e3, mut e4, mut e5) = (0.0, 0.0, 0.0, 0.0, 0.0);
        let mut l = 1usize;
        let mut w = 1.0 - p;
        loop {
            let r = scale(l);
            let lf = l as f64;
            e1 += w * (lf + 1.0) * r;
            let frac = lf / (lf + 1.0) * r * w;
            if l < n {
                e2 += frac;
                e4 += lf / (lf + 1.0) * r * w;
                e5 += frac * (1.0 + 2.0 * lf) * phi2_6;
            } else {
                e3 += frac;
            }
            l += 1;
            w *= p;
            if l >= n && (w == 0.0 || w * (l as f64 + 1.0) * scale(l) < 1e-17 * (e1 + e3).max(1e-300)) {
                break;
            }
        }
        e1 *= eta / 2.0;
        let e6 = nf / (nf + 1.0) * p.powi(n as i32 - 1) * (1.0 + (1.0 + 2.0 * nf) * phi2_6);
        per_k.push(e1 + e2 + e3 <= e4 + e5 + e6);
        identity_ok &= (e2 - e4).abs() <= 1e-12 * e4.abs().max(1e-300);
        tail_bound_ok &= e3 <= nf / (nf + 1.0) * p.powi(n as i32 - 1) * (1.0 + 1e-12);

        // Reduced form, scaled by (N+1)^{2k-1}.
        let mut a = 0.0;
        for l in 1..n {
            a += p.powi(l as i32 + 1) * ((nf + 1.0) / (l as f64 + 1.0)).powi(two_k - 1);
        }
        let tail = p.powi(n as i32 - 1) / (1.0 - p);
        reduced_holds &= eta / 2.0 * (a + tail) <= phi * phi / (12.0 * (nf + 1.0).powi(2)) * a;
    }
    let first_failing_k = per_k.iter().position(|&h| !h).map(|i| i + 1);
    let k_monotone_ok = !(per_k[0] && per_k[k_max - 1]) || per_k.iter().all(|&h| h);
    Ok(MixedCheck {
        holds: first_failing_k.is_none(),
        first_failing_k,
        per_k,
        reduced_holds,
        identity_ok,
        tail_bound_ok,
        k_monotone_ok,
    })
}
