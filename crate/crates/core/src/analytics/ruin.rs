//! First-visit generating functions of simple random walk on `{0, ..., N}`.
//!
//! For `z = 1 / cos(phi)` the generating function of the first visit to
//! the far end started next to the near end is `sin(phi) / sin(N phi)`;
//! the other supported pairs follow by reflection.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};

const SMALL_ANGLE: f64 = 1e-8;
const POLE_MARGIN: f64 = 1e-6;
const SERIES_TOL: f64 = 1e-14;
const SERIES_MAX_STEPS: usize = 50_000_000;

/// The ruin chain on `{0, ..., n}` evaluated at `z >= 1` below its radius
/// of convergence `1 / cos(pi / n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuinChain {
    n: usize,
    z: f64,
    phi: f64,
}

impl RuinChain {
    pub fn new(n: usize, z: f64) -> Result<Self> {
        if n < 2 {
            return Err(domain(format!("chain length {n} must be at least 2")));
        }
        if !(z >= 1.0) || !z.is_finite() {
            return Err(domain(format!("z = {z} must be a finite number >= 1")));
        }
        let phi = (1.0 / z).acos();
        if phi >= PI / n as f64 {
            return Err(Error::OutsideRadius { z, radius: radius(n) });
        }
        Ok(Self { n, z, phi })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// The angle with `z = 1 / cos(phi)`.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Closed-form first-visit generating function `F_N(x, y | z)` for the
    /// pairs `(1, N)`, `(N-1, N)`, `(1, 0)` and `(N-1, 0)`.
    pub fn first_visit(&self, x: usize, y: usize) -> Result<f64> {
        let n = self.n;
        let near = if (x, y) == (1, n) || (x, y) == (n - 1, 0) {
            1
        } else if (x, y) == (n - 1, n) || (x, y) == (1, 0) {
            n - 1
        } else {
            return Err(Error::UnsupportedPair { n, x, y });
        };
        if self.phi < SMALL_ANGLE {
            return Ok(near as f64 / n as f64);
        }
        let gap = PI / n as f64 - self.phi;
        let denom = if gap < POLE_MARGIN {
            // sin(N phi) = sin(N gap) keeps relative accuracy next to the pole.
            (n as f64 * gap).sin()
        } else {
            (n as f64 * self.phi).sin()
        };
        Ok((near as f64 * self.phi).sin() / denom)
    }
}

/// Radius of convergence `1 / cos(pi / n)` of the first-visit generating
/// functions on `{0, ..., n}` (infinite for `n = 2`).
pub fn radius(n: usize) -> f64 {
    if n <= 2 {
        f64::INFINITY
    } else {
        1.0 / (PI / n as f64).cos()
    }
}

/// `F_N(x, y | z) = sum_k P_x[first visit to y at time k] z^k`, summed
/// directly from the taboo transition probabilities until the remainder
/// is below `tol`. Works for every pair and every `z >= 0` with
/// `z cos(pi / n) < 1`.
pub fn first_visit_series(n: usize, x: usize, y: usize, z: f64, tol: f64) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("chain length {n} must be at least 2")));
    }
    if x > n || y > n {
        return Err(domain(format!("states ({x}, {y}) outside 0..={n}")));
    }
    if !(z >= 0.0) {
        return Err(domain(format!("z = {z} must be non-negative")));
    }
    if x == y {
        return Ok(1.0);
    }
    if x == 0 || x == n {
        return Ok(0.0);
    }
    let rho = (PI / n as f64).cos();
    let ratio = z * rho;
    if ratio >= 1.0 {
        return Err(Error::Divergent { z, ratio });
    }
    let bound_factor = z * ((n - 1) as f64).sqrt() / (1.0 - ratio);
    // w[i] = z^k P_x[at i at time k, y not yet visited], interior states only.
    let mut w = vec![0.0; n + 1];
    let mut next = vec![0.0; n + 1];
    w[x] = 1.0;
    let mut total = 0.0;
    for _ in 0..SERIES_MAX_STEPS {
        next.iter_mut().for_each(|v| *v = 0.0);
        for i in 1..n {
            let m = w[i];
            if m == 0.0 {
                continue;
            }
            let half = 0.5 * z * m;
            for j in [i - 1, i + 1] {
                if j == y {
                    total += half;
                } else if j != 0 && j != n {
                    next[j] += half;
                }
            }
        }
        std::mem::swap(&mut w, &mut next);
        let mass: f64 = w.iter().sum();
        if bound_factor * mass < tol {
            return Ok(total);
        }
    }
    Err(Error::NonConvergence { iterations: SERIES_MAX_STEPS, residual: f64::NAN })
}

/// Which leading-order lower bound of the first-visit generating function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Start next to the target: `F_{N+1}(N, N+1)`.
    Near,
    /// Start at the opposite end: `F_{N+1}(1, N+1)`.
    Far,
}

/// Second-order lower bounds on `F_{N+1}(N, N+1 | 1/cos(phi))` (near) and
/// `F_{N+1}(1, N+1 | 1/cos(phi))` (far), valid for `0 <= phi < pi/(N+1)`.
pub fn fapprox_lower(n: usize, phi: f64, side: Side) -> Result<f64> {
    if n < 1 {
        return Err(domain("N must be at least 1"));
    }
    let nf = n as f64;
    if !(phi >= 0.0) || phi >= PI / (nf + 1.0) {
        return Err(domain(format!("phi = {phi} outside [0, pi/(N+1))")));
    }
    let phi2 = phi * phi;
    Ok(match side {
        Side::Near => nf / (nf + 1.0) * (1.0 + (1.0 + 2.0 * nf) * phi2 / 6.0),
        Side::Far => 1.0 / (nf + 1.0) * (1.0 + (2.0 * nf + nf * nf) * phi2 / 6.0),
    })
}

/// Absorbing states counted by [`expected_frozen`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Zero,
    End,
    Both,
}

/// Expected number of particles frozen at the target set when a branching
/// random walk with mean offspring `mu_bar` starts one particle at `x` on
/// `{0, ..., n}` and freezes particles at `0` and `n`. Equals the
/// first-visit generating function at `z = mu_bar`.
pub fn expected_frozen(n: usize, x: usize, target: Target, mu_bar: f64) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("chain length {n} must be at least 2")));
    }
    if x > n {
        return Err(domain(format!("start {x} outside 0..={n}")));
    }
    let one = |y: usize| -> Result<f64> {
        if x == 0 || x == n {
            return Ok(if x == y { 1.0 } else { 0.0 });
        }
        if mu_bar >= 1.0 {
            if let Ok(chain) = RuinChain::new(n, mu_bar) {
                if let Ok(v) = chain.first_visit(x, y) {
                    return Ok(v);
                }
            } else {
                return Err(Error::OutsideRadius { z: mu_bar, radius: radius(n) });
            }
        }
        first_visit_series(n, x, y, mu_bar, SERIES_TOL)
    };
    match target {
        Target::Zero => one(0),
        Target::End => one(n),
        Target::Both => Ok(one(0)? + one(n)?),
    }
}
