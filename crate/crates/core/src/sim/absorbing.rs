//! Branching random walk on a path with both ends absorbing.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::law::DiscreteLaw;
use crate::rng::{vertex_rng, Stream};
use crate::stats::MeanEstimate;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbsorbingEstimate {
    /// Particles frozen at `0`, per replica.
    pub at_zero: MeanEstimate,
    /// Particles frozen at `n`, per replica.
    pub at_end: MeanEstimate,
    /// Replicas dropped for exceeding the particle budget.
    pub incomparable: usize,
}

fn exact_binomial<R: Rng>(n: u64, p: f64, rng: &mut R) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n, p).expect("valid binomial").sample(rng)
}

fn offspring_total<R: Rng>(n: u64, law: &DiscreteLaw, rng: &mut R) -> u64 {
    if let Some(k) = law.as_point() {
        return n * k as u64;
    }
    let mut remaining = n;
    let mut mass = 1.0;
    let mut total = 0;
    for (k, &p) in law.probs().iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if p <= 0.0 {
            continue;
        }
        let c = if mass - p <= 1e-15 { remaining } else { exact_binomial(remaining, p / mass, rng) };
        total += k as u64 * c;
        remaining -= c;
        mass -= p;
    }
    total
}

/// One replica: frozen counts at `0` and `n`, or `None` when more than
/// `particle_cap` offspring were produced.
fn replica<R: Rng>(n: usize, start: usize, law: &DiscreteLaw, particle_cap: u64, rng: &mut R) -> Option<(u64, u64)> {
    if start == 0 {
        return Some((1, 0));
    }
    if start == n {
        return Some((0, 1));
    }
    let mut count = vec![0u64; n + 1];
    let mut next = vec![0u64; n + 1];
    count[start] = 1;
    let (mut zero, mut end) = (0u64, 0u64);
    let mut work = 0u64;
    loop {
        next.iter_mut().for_each(|x| *x = 0);
        let mut interior = 0u64;
        for x in 1..n {
            let m = count[x];
            if m == 0 {
                continue;
            }
            let t = offspring_total(m, law, rng);
            work += t;
            if work > particle_cap {
                return None;
            }
            let left = exact_binomial(t, 0.5, rng);
            next[x - 1] += left;
            next[x + 1] += t - left;
        }
        zero += next[0];
        end += next[n];
        next[0] = 0;
        next[n] = 0;
        for &c in &next[1..n] {
            interior += c;
        }
        std::mem::swap(&mut count, &mut next);
        if interior == 0 {
            return Some((zero, end));
        }
    }
}

/// Monte Carlo estimate of the expected number of particles frozen at each
/// end of `{0, ..., n}` for a branching random walk started at `start`.
pub fn absorbing_stretch_bmc(
    n: usize,
    start: usize,
    law: &DiscreteLaw,
    replicas: usize,
    seed: u64,
    particle_cap: u64,
) -> Result<AbsorbingEstimate> {
    if n < 2 || start > n {
        return Err(domain(format!("need n >= 2 and start in 0..=n, got n = {n}, start = {start}")));
    }
    let mut zeros = Vec::with_capacity(replicas);
    let mut ends = Vec::with_capacity(replicas);
    let mut incomparable = 0;
    for i in 0..replicas {
        let mut rng = vertex_rng(seed, i as u64, Stream::Branching);
        match replica(n, start, law, particle_cap, &mut rng) {
            Some((z, e)) => {
                zeros.push(z as f64);
                ends.push(e as f64);
            }
            None => incomparable += 1,
        }
    }
    Ok(AbsorbingEstimate {
        at_zero: MeanEstimate::from_samples(&zeros),
        at_end: MeanEstimate::from_samples(&ends),
        incomparable,
    })
}
