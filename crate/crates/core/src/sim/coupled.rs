//! The frog model run on the same probability space as a dominating
//! branching Markov chain with offspring law `1 + eta`.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::frog::{frogs_at, Visited};
use super::{FrogInit, SimConfig, SimReport, Termination};
use crate::gw::{RootedTree, VertexId, ROOT};
use crate::rng::{run_rng, Stream};
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledReport {
    pub fm: SimReport,
    /// The branching chain. Its population is counted after branching, so
    /// entry `t` of its trajectory is the number of particles about to
    /// move in round `t + 1`.
    pub bmc: SimReport,
    /// Both legs reached the step cap.
    pub comparable: bool,
}

/// Runs the coupled pair from one frog and one particle at the root.
///
/// Every awake frog carries a designated particle that moves with it. When
/// frogs reach an unvisited vertex, the particle of one of them (chosen
/// uniformly) splits into `f_v + 1` particles, one for it and one for each
/// frog woken there. All other particles branch independently from
/// `1 + eta`; the extra offspring move on their own.
pub fn simulate_coupled(tree: &RootedTree, init: &FrogInit, seed: u64, cfg: &SimConfig) -> CoupledReport {
    let law = init.branching_law();
    let mut moves = run_rng(seed, Stream::Moves);
    let mut free_moves = run_rng(seed, Stream::FreeMoves);
    let mut branching = run_rng(seed, Stream::Branching);
    let mut coupling = run_rng(seed, Stream::Coupling);

    let mut fm = SimReport::new(seed);
    let mut bmc = SimReport::new(seed);
    let mut frogs: Vec<VertexId> = vec![ROOT];
    let mut free: Vec<VertexId> = Vec::new();
    let mut next_free: Vec<VertexId> = Vec::new();
    let mut visited = Visited::new();
    let k = law.sample(&mut branching);
    free.extend(std::iter::repeat_n(ROOT, k as usize - 1));
    fm.record(cfg, 0, 1);
    bmc.record(cfg, 0, 1 + free.len() as u64);

    let mut work = 0u64;
    let mut termination = Termination::StepCap;
    let mut groups: FxHashMap<VertexId, Vec<usize>> = FxHashMap::default();
    let mut group_order: Vec<VertexId> = Vec::new();

    for t in 1..=cfg.step_cap {
        let population = (frogs.len() + free.len()) as u64;
        if work + population > cfg.particle_cap {
            termination = Termination::ParticleCap;
            break;
        }
        work += population;

        for f in frogs.iter_mut() {
            *f = tree.random_neighbor(*f, &mut moves);
            if *f == ROOT {
                fm.nu += 1;
                bmc.nu += 1;
            }
        }
        next_free.clear();
        for &v in &free {
            let w = tree.random_neighbor(v, &mut free_moves);
            if w == ROOT {
                bmc.nu += 1;
            }
            let k = law.sample(&mut branching);
            next_free.extend(std::iter::repeat_n(w, k as usize));
        }
        std::mem::swap(&mut free, &mut next_free);

        groups.clear();
        group_order.clear();
        let movers = frogs.len();
        for i in 0..movers {
            let v = frogs[i];
            if visited.contains(v) {
                let k = law.sample(&mut branching);
                free.extend(std::iter::repeat_n(v, k as usize - 1));
            } else {
                groups.entry(v).or_insert_with(|| {
                    group_order.push(v);
                    Vec::new()
                });
                groups.get_mut(&v).expect("just inserted").push(i);
            }
        }
        for &v in &group_order {
            let members = &groups[&v];
            let chosen = coupling.random_range(0..members.len());
            for (j, _) in members.iter().enumerate() {
                if j != chosen {
                    let k = law.sample(&mut branching);
                    free.extend(std::iter::repeat_n(v, k as usize - 1));
                }
            }
            visited.insert(v);
            let c = frogs_at(tree, init, seed, v);
            fm.wakeups += c as u64;
            frogs.extend(std::iter::repeat_n(v, c as usize));
        }

        fm.steps = t;
        bmc.steps = t;
        fm.record(cfg, t, frogs.len() as u64);
        bmc.record(cfg, t, (frogs.len() + free.len()) as u64);
    }
    fm.termination = termination;
    bmc.termination = termination;
    CoupledReport { comparable: termination == Termination::StepCap, fm, bmc }
}
