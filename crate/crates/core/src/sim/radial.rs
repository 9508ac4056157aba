//! Branching Markov chains on spherically symmetric trees, tracked by the
//! number of particles at each distance from the root.
//!
//! Only distances matter for root visits on such trees, so the chain can
//! be run with per-level counts. Counts are drawn exactly while they fit
//! comfortably in a `u64`; beyond that, binomial and multinomial draws use
//! their normal approximations.

use rand::Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::Termination;
use crate::gw::SphericalProfile;
use crate::law::DiscreteLaw;
use crate::rng::{run_rng, Stream};

const EXACT_LIMIT: f64 = 1e15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialReport {
    pub seed: u64,
    pub steps: u64,
    /// Arrivals at the root after time 0.
    pub nu: f64,
    /// Largest number of particles that could still reach the root.
    pub population_max: f64,
    /// Whether any count was drawn from a normal approximation.
    pub approximate: bool,
    pub termination: Termination,
}

fn binomial<R: Rng>(n: f64, p: f64, rng: &mut R, approx: &mut bool) -> f64 {
    if n <= 0.0 || p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return n;
    }
    if n <= EXACT_LIMIT {
        return Binomial::new(n as u64, p).expect("valid binomial").sample(rng) as f64;
    }
    *approx = true;
    let z: f64 = rng.sample(StandardNormal);
    (n * p + z * (n * p * (1.0 - p)).sqrt()).round().clamp(0.0, n)
}

/// Total offspring of `n` independent particles.
fn total_offspring<R: Rng>(n: f64, law: &DiscreteLaw, rng: &mut R, approx: &mut bool) -> f64 {
    if let Some(k) = law.as_point() {
        return n * k as f64;
    }
    let mut remaining = n;
    let mut mass = 1.0;
    let mut total = 0.0;
    for (k, &p) in law.probs().iter().enumerate() {
        if remaining <= 0.0 {
            break;
        }
        if p <= 0.0 {
            continue;
        }
        let c = if mass - p <= 1e-15 { remaining } else { binomial(remaining, p / mass, rng, approx) };
        total += k as f64 * c;
        remaining -= c;
        mass -= p;
    }
    total
}

/// Runs the chain for up to `step_cap` rounds from one particle at the
/// root. Particles further from the root than the number of remaining
/// rounds are dropped, as they cannot contribute to the count.
pub fn simulate_bmc_radial(profile: SphericalProfile, law: &DiscreteLaw, seed: u64, step_cap: u64) -> RadialReport {
    let mut rng = run_rng(seed, Stream::Branching);
    let levels = (step_cap as usize) / 2 + 2;
    let mut count = vec![0.0f64; levels];
    let mut next = vec![0.0f64; levels];
    count[0] = 1.0;
    let mut approx = false;
    let mut report = RadialReport {
        seed,
        steps: 0,
        nu: 0.0,
        population_max: 1.0,
        approximate: false,
        termination: Termination::StepCap,
    };
    let mut reach = 0usize;
    for t in 1..=step_cap {
        let remaining = (step_cap - t) as usize;
        next.iter_mut().for_each(|x| *x = 0.0);
        let mut alive = false;
        for k in 0..=reach {
            let n = count[k];
            if n == 0.0 {
                continue;
            }
            let offspring = total_offspring(n, law, &mut rng, &mut approx);
            if offspring == 0.0 {
                continue;
            }
            let c = profile.children_at(k) as f64;
            let down = if k == 0 {
                0.0
            } else {
                binomial(offspring, 1.0 / (c + 1.0), &mut rng, &mut approx)
            };
            let up = offspring - down;
            if k == 1 {
                report.nu += down;
            }
            if k >= 1 {
                next[k - 1] += down;
                alive |= down > 0.0;
            }
            if up > 0.0 && c > 0.0 && k < remaining && k + 1 < levels {
                next[k + 1] += up;
                alive = true;
            }
        }
        std::mem::swap(&mut count, &mut next);
        reach = (reach + 1).min(remaining).min(levels - 1);
        report.steps = t;
        let population: f64 = count[..=reach].iter().sum();
        report.population_max = report.population_max.max(population);
        if !alive {
            // Either extinct or out of reach of the root for the rest of the run.
            report.termination = Termination::PopulationExtinct;
            break;
        }
    }
    report.approximate = approx;
    report
}
