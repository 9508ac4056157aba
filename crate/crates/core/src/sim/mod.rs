//! Frog models and branching Markov chains on rooted trees.

mod absorbing;
mod bmc;
mod coupled;
mod frog;
mod indicator;
mod radial;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::law::DiscreteLaw;
use crate::rng::{vertex_rng, Stream};

pub use absorbing::{absorbing_stretch_bmc, AbsorbingEstimate};
pub use bmc::{simulate_bmc, OffspringField};
pub use coupled::{simulate_coupled, CoupledReport};
pub use frog::{simulate_fm, simulate_fm_prime, FmPrimeReport, StretchLedger};
pub use indicator::{recurrence_indicator, IndicatorRow, RecurrenceIndicator, TreeFamily};
pub use radial::{simulate_bmc_radial, RadialReport};

pub const DEFAULT_STEP_CAP: u64 = 1_000;
pub const DEFAULT_PARTICLE_CAP: u64 = 10_000_000;

/// Law of the number of sleeping frogs placed at each non-root vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FrogInit {
    law: DiscreteLaw,
}

impl FrogInit {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Ok(Self { law: DiscreteLaw::new(probs)? })
    }

    pub fn from_law(law: DiscreteLaw) -> Self {
        Self { law }
    }

    /// `k` sleeping frogs everywhere.
    pub fn constant(k: usize) -> Self {
        Self { law: DiscreteLaw::point(k) }
    }

    /// One sleeping frog with probability `p`, none otherwise.
    pub fn bernoulli(p: f64) -> Result<Self> {
        Ok(Self { law: DiscreteLaw::bernoulli(p)? })
    }

    pub fn law(&self) -> &DiscreteLaw {
        &self.law
    }

    pub fn mean(&self) -> f64 {
        self.law.mean()
    }

    /// Frog count at the vertex with path key `key`. Depends only on
    /// `(seed, key)`.
    pub fn count_at(&self, seed: u64, key: u64) -> u32 {
        match self.law.as_point() {
            Some(k) => k,
            None => self.law.sample(&mut vertex_rng(seed, key, Stream::Frogs)),
        }
    }

    /// Offspring law `1 + eta` of the dominating branching Markov chain.
    pub fn branching_law(&self) -> DiscreteLaw {
        self.law.shifted(1)
    }
}

/// Stopping rules shared by the simulators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    /// Number of synchronous rounds.
    pub step_cap: u64,
    /// Budget on the total number of particle moves over the run.
    pub particle_cap: u64,
    /// Population is recorded every `trajectory_stride` rounds (0: never).
    pub trajectory_stride: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { step_cap: DEFAULT_STEP_CAP, particle_cap: DEFAULT_PARTICLE_CAP, trajectory_stride: 0 }
    }
}

impl SimConfig {
    pub fn with_steps(step_cap: u64) -> Self {
        Self { step_cap, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    StepCap,
    PopulationExtinct,
    ParticleCap,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::StepCap => "step_cap",
            Termination::PopulationExtinct => "population_extinct",
            Termination::ParticleCap => "particle_cap",
        }
    }
}

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub seed: u64,
    /// Completed rounds.
    pub steps: u64,
    /// Arrivals at the root after time 0.
    pub nu: u64,
    /// Largest number of active particles (awake frogs) seen.
    pub awake_max: u64,
    /// Frogs woken over the run (0 for branching chains).
    pub wakeups: u64,
    pub termination: Termination,
    /// Active population at rounds `0, s, 2s, ...` for stride `s`.
    pub trajectory: Vec<u64>,
}

impl SimReport {
    pub(crate) fn new(seed: u64) -> Self {
        Self {
            seed,
            steps: 0,
            nu: 0,
            awake_max: 1,
            wakeups: 0,
            termination: Termination::StepCap,
            trajectory: Vec::new(),
        }
    }

    pub(crate) fn record(&mut self, cfg: &SimConfig, round: u64, population: u64) {
        self.awake_max = self.awake_max.max(population);
        if cfg.trajectory_stride > 0 && round.is_multiple_of(cfg.trajectory_stride) {
            self.trajectory.push(population);
        }
    }
}

/// Sleeping frogs at `v`: an attached override, else a draw from `init`
/// (none at the root).
pub fn frog_count(tree: &crate::gw::RootedTree, init: &FrogInit, seed: u64, v: crate::gw::VertexId) -> u32 {
    frog::frogs_at(tree, init, seed, v)
}
