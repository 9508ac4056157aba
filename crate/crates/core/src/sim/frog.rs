//! The frog model, and its variant in which every stretch is crossed in a
//! single step.

use rand::Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::{FrogInit, SimConfig, SimReport, Termination};
use crate::gw::{RootedTree, StretchMap, VertexId, ROOT};
use crate::rng::{run_rng, Stream};

/// Frog bookkeeping for stretches crossed in one step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StretchLedger {
    pub stretches_woken: u64,
    /// Frogs that stepped onto a stretch from one of its ends.
    pub entries: u64,
    /// Sleeping frogs released when a stretch was first entered.
    pub sleepers_released: u64,
    /// Frogs placed at an end vertex after crossing.
    pub exits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FmPrimeReport {
    pub report: SimReport,
    pub ledger: StretchLedger,
}

pub(crate) fn frogs_at(tree: &RootedTree, init: &FrogInit, seed: u64, v: VertexId) -> u32 {
    match tree.frog_override(v) {
        Some(c) => c,
        None if v == ROOT => 0,
        None => init.count_at(seed, tree.key(v)),
    }
}

/// Runs the frog model from one awake frog at the root.
pub fn simulate_fm(tree: &RootedTree, init: &FrogInit, seed: u64, cfg: &SimConfig) -> SimReport {
    run(tree, init, seed, cfg, None, &[]).0
}

/// Runs the frog model in which a frog entering a stretch of length `l` at
/// position `i` (counted from the end nearer the root) is immediately
/// placed at the far end with probability `i / (l + 1)` and at the near
/// end otherwise. The first entry also releases the stretch's sleeping
/// frogs in the same way.
pub fn simulate_fm_prime(
    tree: &RootedTree,
    stretches: &StretchMap,
    init: &FrogInit,
    seed: u64,
    cfg: &SimConfig,
) -> FmPrimeReport {
    let (report, ledger, _) = run(tree, init, seed, cfg, Some(stretches), &[]);
    FmPrimeReport { report, ledger }
}

/// Runs the frog model and also returns the root-visit count after each
/// round listed in `checkpoints` (ascending).
pub(crate) fn simulate_fm_checkpoints(
    tree: &RootedTree,
    init: &FrogInit,
    seed: u64,
    cfg: &SimConfig,
    checkpoints: &[u64],
) -> (SimReport, Vec<u64>) {
    let (report, _, nu) = run(tree, init, seed, cfg, None, checkpoints);
    (report, nu)
}

struct Shortcuts {
    by_start: FxHashMap<VertexId, usize>,
    by_end: FxHashMap<VertexId, usize>,
    upper: Vec<VertexId>,
    lower: Vec<VertexId>,
    len: Vec<u32>,
    start: Vec<VertexId>,
    woken: Vec<bool>,
}

impl Shortcuts {
    fn new(tree: &RootedTree, map: &StretchMap) -> Self {
        let (by_start, by_end) = map.endpoint_index();
        let s = &map.stretches;
        Self {
            by_start,
            by_end,
            upper: s.iter().map(|s| tree.parent(s.start).expect("stretches avoid the root")).collect(),
            lower: s.iter().map(|s| tree.children(s.end).start).collect(),
            len: s.iter().map(|s| s.len).collect(),
            start: s.iter().map(|s| s.start).collect(),
            woken: vec![false; s.len()],
        }
    }

    /// Stretch entered by stepping `from -> to`, with the entry position.
    fn entered(&self, from: VertexId, to: VertexId) -> Option<(usize, u32)> {
        if let Some(&s) = self.by_start.get(&to) {
            if self.upper[s] == from {
                return Some((s, 1));
            }
        }
        if let Some(&s) = self.by_end.get(&to) {
            if self.lower[s] == from {
                return Some((s, self.len[s]));
            }
        }
        None
    }

    fn exit<R: Rng>(&self, s: usize, pos: u32, rng: &mut R) -> VertexId {
        let p = pos as f64 / (self.len[s] as f64 + 1.0);
        if rng.random::<f64>() < p {
            self.lower[s]
        } else {
            self.upper[s]
        }
    }
}

fn run(
    tree: &RootedTree,
    init: &FrogInit,
    seed: u64,
    cfg: &SimConfig,
    stretches: Option<&StretchMap>,
    checkpoints: &[u64],
) -> (SimReport, StretchLedger, Vec<u64>) {
    let mut moves = run_rng(seed, Stream::Moves);
    let mut exits = run_rng(seed, Stream::Exits);
    let mut shortcuts = stretches.filter(|m| !m.stretches.is_empty()).map(|m| Shortcuts::new(tree, m));
    let mut ledger = StretchLedger::default();
    let mut report = SimReport::new(seed);
    let mut nu_at = Vec::with_capacity(checkpoints.len());
    let mut next_checkpoint = 0;

    let mut frogs: Vec<VertexId> = vec![ROOT];
    let mut visited = Visited::new();
    let mut work = 0u64;
    report.record(cfg, 0, 1);

    for t in 1..=cfg.step_cap {
        if work + frogs.len() as u64 > cfg.particle_cap {
            report.termination = Termination::ParticleCap;
            break;
        }
        work += frogs.len() as u64;
        let movers = frogs.len();
        for i in 0..movers {
            let from = frogs[i];
            let mut to = tree.random_neighbor(from, &mut moves);
            if let Some(sc) = shortcuts.as_mut() {
                if let Some((s, pos)) = sc.entered(from, to) {
                    ledger.entries += 1;
                    ledger.exits += 1;
                    to = sc.exit(s, pos, &mut exits);
                    if !sc.woken[s] {
                        sc.woken[s] = true;
                        ledger.stretches_woken += 1;
                        let mut v = sc.start[s];
                        for j in 1..=sc.len[s] {
                            let c = frogs_at(tree, init, seed, v);
                            ledger.sleepers_released += c as u64;
                            ledger.exits += c as u64;
                            report.wakeups += c as u64;
                            for _ in 0..c {
                                frogs.push(sc.exit(s, j, &mut exits));
                            }
                            if j < sc.len[s] {
                                v = tree.children(v).start;
                            }
                        }
                    }
                }
            }
            frogs[i] = to;
        }
        // Every frog now in `frogs` arrived somewhere this round.
        let arrived = frogs.len();
        for i in 0..arrived {
            let v = frogs[i];
            if v == ROOT {
                report.nu += 1;
            }
            if visited.insert(v) {
                let c = frogs_at(tree, init, seed, v);
                report.wakeups += c as u64;
                frogs.extend(std::iter::repeat_n(v, c as usize));
            }
        }
        report.steps = t;
        report.record(cfg, t, frogs.len() as u64);
        while next_checkpoint < checkpoints.len() && checkpoints[next_checkpoint] == t {
            nu_at.push(report.nu);
            next_checkpoint += 1;
        }
    }
    (report, ledger, nu_at)
}

/// Visited flags indexed by vertex id; the root starts visited.
pub(crate) struct Visited(Vec<bool>);

impl Visited {
    pub(crate) fn new() -> Self {
        Self(vec![true])
    }

    #[inline]
    pub(crate) fn contains(&self, v: VertexId) -> bool {
        self.0.get(v as usize).copied().unwrap_or(false)
    }

    /// Marks `v`; returns whether it was unvisited.
    #[inline]
    pub(crate) fn insert(&mut self, v: VertexId) -> bool {
        let i = v as usize;
        if i >= self.0.len() {
            self.0.resize((i + 1).max(2 * self.0.len()), false);
        }
        !std::mem::replace(&mut self.0[i], true)
    }
}
