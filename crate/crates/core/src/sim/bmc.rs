//! Branching Markov chains driven by simple random walk.

use super::{SimConfig, SimReport, Termination};
use crate::gw::{RootedTree, VertexId, ROOT};
use crate::law::DiscreteLaw;
use crate::rng::{run_rng, Stream};

/// Offspring law as a function of the particle's position.
pub trait OffspringField: Sync {
    fn law_at(&self, tree: &RootedTree, v: VertexId) -> &DiscreteLaw;
}

impl OffspringField for DiscreteLaw {
    fn law_at(&self, _: &RootedTree, _: VertexId) -> &DiscreteLaw {
        self
    }
}

/// Runs a branching Markov chain from one particle at the root. Each
/// round every particle is replaced by a random number of offspring,
/// each of which takes one random-walk step.
pub fn simulate_bmc<F: OffspringField + ?Sized>(
    tree: &RootedTree,
    offspring: &F,
    seed: u64,
    cfg: &SimConfig,
) -> SimReport {
    let mut moves = run_rng(seed, Stream::Moves);
    let mut branching = run_rng(seed, Stream::Branching);
    let mut report = SimReport::new(seed);
    let mut particles: Vec<VertexId> = vec![ROOT];
    let mut next: Vec<VertexId> = Vec::new();
    let mut work = 0u64;
    report.record(cfg, 0, 1);

    for t in 1..=cfg.step_cap {
        if particles.is_empty() {
            report.termination = Termination::PopulationExtinct;
            break;
        }
        if work + particles.len() as u64 > cfg.particle_cap {
            report.termination = Termination::ParticleCap;
            break;
        }
        next.clear();
        for &v in &particles {
            let law = offspring.law_at(tree, v);
            let k = law.sample(&mut branching);
            for _ in 0..k {
                let w = tree.random_neighbor(v, &mut moves);
                if w == ROOT {
                    report.nu += 1;
                }
                next.push(w);
            }
        }
        work += next.len() as u64;
        std::mem::swap(&mut particles, &mut next);
        report.steps = t;
        report.record(cfg, t, particles.len() as u64);
    }
    report
}
