//! Experiment configuration and the commands run by the `frogmodel`
//! binary. Each command returns its output as text so it can be tested
//! without touching the filesystem.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{
    first_visit_series, radius, rho_homogeneous, rho_subdivision, rho_tree_lower_bounds, RuinChain,
};
use crate::error::{Error, Result};
use crate::gw::{
    classify_types, erase_bushes, label_stretches, truncate_stretches, write_edge_list, Labeling,
    OffspringDistribution, RootedTree, DEFAULT_BUSH_CAP,
};
use crate::rng::{mix64, GENERATOR_NAME};
use crate::search::{fmt_real, plateaus, sweep_cd, write_plot_data, write_sweep_csv, SweepConfig};
use crate::sim::{
    simulate_bmc, simulate_bmc_radial, simulate_coupled, simulate_fm, simulate_fm_prime, FrogInit, SimConfig,
    TreeFamily,
};
use crate::stats::{quantile, MeanEstimate};

fn default_frogs() -> Vec<f64> {
    vec![1.0]
}

fn default_depth() -> u32 {
    4
}

/// Replica seeds: an explicit list, or `count` seeds derived from `base`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seeds {
    List(Vec<u64>),
    Range { base: u64, count: usize },
}

impl Default for Seeds {
    fn default() -> Self {
        Seeds::Range { base: 1, count: 1 }
    }
}

impl Seeds {
    pub fn expand(&self) -> Vec<u64> {
        match self {
            Seeds::List(v) => v.clone(),
            Seeds::Range { base, count } => (0..*count as u64).map(|i| base.wrapping_add(i)).collect(),
        }
    }

    /// Header form: the full list, or the inclusive range it expands to.
    pub fn describe(&self) -> String {
        match self {
            Seeds::List(v) => v.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
            Seeds::Range { count: 0, .. } => "none".into(),
            Seeds::Range { base, count } => format!("{base}..={}", base.wrapping_add(*count as u64 - 1)),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampler {
    #[default]
    Standard,
    Decomposed,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelMode {
    #[default]
    None,
    Stretches,
    Types,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleTreeConfig {
    pub offspring: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_depth")]
    pub depth: u32,
    #[serde(default)]
    pub sampler: Sampler,
    /// Law of sleeping frogs per vertex.
    #[serde(default = "default_frogs")]
    pub frogs: Vec<f64>,
    #[serde(default)]
    pub labels: LabelMode,
    /// Shorten every stretch to at most this many vertices.
    #[serde(default)]
    pub truncate: Option<u32>,
    /// Remove bushes, moving their frogs to the attachment vertex.
    #[serde(default)]
    pub erase_bushes: bool,
    #[serde(default = "default_bush_cap")]
    pub bush_cap: usize,
}

fn default_bush_cap() -> usize {
    DEFAULT_BUSH_CAP
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimMode {
    #[default]
    Fm,
    #[serde(alias = "fm_prime")]
    FmPrime,
    Bmc,
    #[serde(alias = "bmc_radial")]
    BmcRadial,
    Coupled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateConfig {
    #[serde(default)]
    pub mode: SimMode,
    pub tree: TreeFamily,
    #[serde(default)]
    pub tree_seed: u64,
    #[serde(default = "default_frogs")]
    pub frogs: Vec<f64>,
    #[serde(default)]
    pub seeds: Seeds,
    #[serde(default)]
    pub sim: SimConfig,
    /// Depth to which stretches are identified in `fm-prime` mode.
    #[serde(default = "default_stretch_horizon")]
    pub stretch_horizon: u32,
}

fn default_stretch_horizon() -> u32 {
    12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum AnalyticsConfig {
    /// Closed form against direct summation on a grid of `(N, z)`.
    GfSweep { n_max: usize, z_points: usize },
    /// Homogeneous-tree spectral radii and their subdivisions for
    /// `d = 2..=d_max` and path lengths `N = 1..=n_max`.
    Rho { d_max: usize, n_max: usize },
    /// Ball spectral-radius lower bounds.
    Spectral {
        tree: TreeFamily,
        #[serde(default)]
        tree_seed: u64,
        radii: Vec<u32>,
    },
}

/// One experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    SampleTree(SampleTreeConfig),
    Simulate(SimulateConfig),
    Analytics(AnalyticsConfig),
    SweepCd(SweepConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub command: Command,
    /// Main output file (standard output when absent).
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Secondary `p1 c_d` file for sweeps.
    #[serde(default)]
    pub plot_data: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Rejects non-positive caps and meshes.
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(format!("{what} must be positive")));
        match &self.command {
            Command::SampleTree(c) => {
                if c.bush_cap == 0 {
                    return bad("bush_cap");
                }
                if c.truncate == Some(0) {
                    return bad("truncate");
                }
            }
            Command::Simulate(c) => {
                if c.sim.step_cap == 0 {
                    return bad("step_cap");
                }
                if c.sim.particle_cap == 0 {
                    return bad("particle_cap");
                }
            }
            Command::Analytics(_) => {}
            Command::SweepCd(c) => {
                if !(c.mesh > 0.0) {
                    return bad("mesh");
                }
                if c.caps.n_cap == 0 || c.caps.k_max == 0 || c.caps.bisection_steps == 0 {
                    return bad("search caps");
                }
                if c.d_cap < 2 {
                    return Err(Error::Config("d_cap must be at least 2".into()));
                }
            }
        }
        Ok(())
    }
}

/// Text produced by a command.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommandOutput {
    pub main: String,
    pub plot: Option<String>,
    /// Aggregate lines for standard output.
    pub summary: Vec<String>,
    /// Human-readable notes for standard error.
    pub notes: Vec<String>,
}

fn header(cfg: &ExperimentConfig, seeds: &str) -> Result<String> {
    let mut h = String::new();
    writeln!(h, "# frogmodel {}", env!("CARGO_PKG_VERSION")).expect("string write");
    writeln!(h, "# generator: {GENERATOR_NAME}").expect("string write");
    writeln!(h, "# config: {}", cfg.to_json()?).expect("string write");
    writeln!(h, "# seeds: {seeds}").expect("string write");
    Ok(h)
}

/// Runs an experiment and returns its output.
pub fn execute(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    cfg.validate()?;
    match &cfg.command {
        Command::SampleTree(c) => sample_tree(cfg, c),
        Command::Simulate(c) => simulate(cfg, c),
        Command::Analytics(c) => analytics(cfg, c),
        Command::SweepCd(c) => sweep(cfg, c),
    }
}

fn sample_tree(cfg: &ExperimentConfig, c: &SampleTreeConfig) -> Result<CommandOutput> {
    let dist = OffspringDistribution::new(c.offspring.clone())?;
    let init = FrogInit::new(c.frogs.clone())?;
    let mut tree = match c.sampler {
        Sampler::Standard => RootedTree::galton_watson(&dist, c.seed, c.depth),
        Sampler::Decomposed => RootedTree::decomposed(&dist, c.seed, c.depth)?,
    };
    let mut notes = Vec::new();
    if c.erase_bushes {
        let erased = erase_bushes(&tree, c.depth, &init, c.seed, c.bush_cap)?;
        notes.push(format!("erased bushes; {} vertices remain", erased.tree.len()));
        tree = erased.tree;
    }
    if let Some(n) = c.truncate {
        let map = label_stretches(&tree, c.depth);
        notes.push(format!("truncated {} stretches to length <= {n}", map.stretches.len()));
        tree = truncate_stretches(&tree, &map, n)?;
    }
    let labels: Option<Labeling> = match c.labels {
        LabelMode::None => None,
        LabelMode::Stretches => Some(label_stretches(&tree, c.depth).labels),
        LabelMode::Types => Some(classify_types(&tree, c.depth)),
    };
    let mut main = header(cfg, &c.seed.to_string())?;
    let mut buf = Vec::new();
    let frogs = |v| crate::sim::frog_count(&tree, &init, c.seed, v);
    write_edge_list(&tree, c.depth, labels.as_ref(), &frogs, &mut buf)?;
    main.push_str(&String::from_utf8(buf).expect("edge list is ASCII"));
    Ok(CommandOutput { main, plot: None, summary: Vec::new(), notes })
}

fn nu_summary(label: &str, nus: &[f64]) -> String {
    if nus.is_empty() {
        return format!("{label}: runs 0");
    }
    let est = MeanEstimate::from_samples(nus);
    let mut sorted = nus.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q = |p| quantile(&sorted, p);
    format!(
        "{label}: runs {} mean nu {} se {} q10 {} q50 {} q90 {}",
        nus.len(),
        fmt_real(est.mean),
        fmt_real(est.se),
        fmt_real(q(0.1)),
        fmt_real(q(0.5)),
        fmt_real(q(0.9))
    )
}

fn simulate(cfg: &ExperimentConfig, c: &SimulateConfig) -> Result<CommandOutput> {
    let init = FrogInit::new(c.frogs.clone())?;
    let tree = c.tree.tree(c.tree_seed)?;
    let seeds = c.seeds.expand();
    let mut main = header(cfg, &c.seeds.describe())?;
    let mut summary = Vec::new();
    match c.mode {
        SimMode::Fm | SimMode::FmPrime | SimMode::Bmc => {
            let map = (c.mode == SimMode::FmPrime).then(|| label_stretches(&tree, c.stretch_horizon));
            let law = init.branching_law();
            let reports: Vec<_> = seeds
                .par_iter()
                .map(|&s| match c.mode {
                    SimMode::Fm => simulate_fm(&tree, &init, s, &c.sim),
                    SimMode::FmPrime => simulate_fm_prime(&tree, map.as_ref().expect("built"), &init, s, &c.sim).report,
                    _ => simulate_bmc(&tree, &law, s, &c.sim),
                })
                .collect();
            let nus: Vec<f64> = reports.iter().map(|r| r.nu as f64).collect();
            summary.push(nu_summary("summary", &nus));
            main.push_str("seed,steps,nu,awake_max,wakeups,termination\n");
            for r in reports {
                writeln!(
                    main,
                    "{},{},{},{},{},{}",
                    r.seed,
                    r.steps,
                    r.nu,
                    r.awake_max,
                    r.wakeups,
                    r.termination.as_str()
                )
                .expect("string write");
            }
        }
        SimMode::BmcRadial => {
            let profile = tree
                .spherical_profile()
                .ok_or_else(|| Error::Config("bmc-radial needs a spherically symmetric tree".into()))?;
            let law = init.branching_law();
            let reports: Vec<_> = seeds
                .par_iter()
                .map(|&s| simulate_bmc_radial(profile, &law, s, c.sim.step_cap))
                .collect();
            let nus: Vec<f64> = reports.iter().map(|r| r.nu).collect();
            summary.push(nu_summary("summary", &nus));
            main.push_str("seed,steps,nu,awake_max,wakeups,termination\n");
            for r in reports {
                writeln!(
                    main,
                    "{},{},{},{},0,{}",
                    r.seed,
                    r.steps,
                    fmt_real(r.nu),
                    fmt_real(r.population_max),
                    r.termination.as_str()
                )
                .expect("string write");
            }
        }
        SimMode::Coupled => {
            let reports: Vec<_> = seeds.par_iter().map(|&s| simulate_coupled(&tree, &init, s, &c.sim)).collect();
            let fm: Vec<f64> = reports.iter().map(|r| r.fm.nu as f64).collect();
            let bmc: Vec<f64> = reports.iter().map(|r| r.bmc.nu as f64).collect();
            let comparable = reports.iter().filter(|r| r.comparable).count();
            let violations = reports.iter().filter(|r| r.comparable && r.fm.nu > r.bmc.nu).count();
            summary.push(nu_summary("frog model", &fm));
            summary.push(nu_summary("branching", &bmc));
            summary.push(format!("comparable runs {comparable}; domination violations {violations}"));
            main.push_str(
                "seed,steps,nu,awake_max,wakeups,termination,nu_bmc,particles_max,bmc_termination,comparable\n",
            );
            for r in reports {
                writeln!(
                    main,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.fm.seed,
                    r.fm.steps,
                    r.fm.nu,
                    r.fm.awake_max,
                    r.fm.wakeups,
                    r.fm.termination.as_str(),
                    r.bmc.nu,
                    r.bmc.awake_max,
                    r.bmc.termination.as_str(),
                    u8::from(r.comparable)
                )
                .expect("string write");
            }
        }
    }
    Ok(CommandOutput { main, plot: None, summary, notes: Vec::new() })
}

fn analytics(cfg: &ExperimentConfig, c: &AnalyticsConfig) -> Result<CommandOutput> {
    let mut main = header(cfg, "-")?;
    let mut notes = Vec::new();
    match c {
        AnalyticsConfig::GfSweep { n_max, z_points } => {
            if *n_max < 2 || *z_points < 1 {
                return Err(Error::Config("gf-sweep needs n_max >= 2 and z_points >= 1".into()));
            }
            main.push_str("N,z,x,y,closed,series,abs_err,divergent\n");
            let mut worst = 0.0f64;
            for n in 2..=*n_max {
                let z_hi = (0.99 * radius(n)).min(10.0);
                for i in 0..*z_points {
                    let z = if *z_points == 1 { 1.0 } else { 1.0 + (z_hi - 1.0) * i as f64 / (*z_points - 1) as f64 };
                    let chain = RuinChain::new(n, z)?;
                    for (x, y) in [(1, n), (n - 1, n), (1, 0), (n - 1, 0)] {
                        let closed = chain.first_visit(x, y)?;
                        let (series, divergent) = match first_visit_series(n, x, y, z, 1e-13) {
                            Ok(s) => (s, false),
                            Err(Error::Divergent { .. }) => (f64::NAN, true),
                            Err(e) => return Err(e),
                        };
                        let err = (closed - series).abs();
                        if !divergent {
                            worst = worst.max(err / closed.max(1.0));
                        }
                        writeln!(
                            main,
                            "{n},{},{x},{y},{},{},{},{}",
                            fmt_real(z),
                            fmt_real(closed),
                            fmt_real(series),
                            fmt_real(err),
                            u8::from(divergent)
                        )
                        .expect("string write");
                    }
                }
            }
            notes.push(format!("largest scaled discrepancy {worst:e}"));
        }
        AnalyticsConfig::Rho { d_max, n_max } => {
            if *d_max < 2 || *n_max < 1 {
                return Err(Error::Config("rho needs d_max >= 2 and n_max >= 1".into()));
            }
            main.push_str("d,N,rho,rho_subdivided,inverse\n");
            for d in 2..=*d_max {
                let rho = rho_homogeneous(d)?;
                for n in 1..=*n_max {
                    let sub = rho_subdivision(rho, n)?;
                    writeln!(main, "{d},{n},{},{},{}", fmt_real(rho), fmt_real(sub), fmt_real(1.0 / sub))
                        .expect("string write");
                }
            }
        }
        AnalyticsConfig::Spectral { tree, tree_seed, radii } => {
            let t = tree.tree(*tree_seed)?;
            main.push_str("radius,value,lower,upper,iterations,method\n");
            for (r, e) in radii.iter().zip(rho_tree_lower_bounds(&t, radii)?) {
                writeln!(
                    main,
                    "{r},{},{},{},{},{}",
                    fmt_real(e.value),
                    fmt_real(e.lower),
                    fmt_real(e.upper),
                    e.iterations,
                    e.descriptor.replace(',', ";")
                )
                .expect("string write");
            }
        }
    }
    Ok(CommandOutput { main, plot: None, summary: Vec::new(), notes })
}

fn sweep(cfg: &ExperimentConfig, c: &SweepConfig) -> Result<CommandOutput> {
    let result = sweep_cd(c)?;
    let mut main = header(cfg, "-")?;
    writeln!(
        main,
        "# conditions: c1 density below offspring mean; c2 offspring mean above (d+1)/d; \
         c3 stretch comparisons; c4 mixed-type comparison for k = 1..{}; c5 offspring mean below spectral ceiling",
        c.caps.k_max
    )
    .expect("string write");
    writeln!(main, "# epsilon: {}", c.caps.epsilon).expect("string write");
    let mut buf = Vec::new();
    write_sweep_csv(&result, &mut buf)?;
    main.push_str(&String::from_utf8(buf).expect("csv is ASCII"));
    let mut plot = Vec::new();
    write_plot_data(&result, &mut plot)?;
    let mut notes: Vec<String> = result.warnings.clone();
    for p in plateaus(&result.rows) {
        notes.push(format!("c_d = {} for p1 in [{}, {}]", p.c_d, fmt_real(p.p1_from), fmt_real(p.p1_to)));
    }
    Ok(CommandOutput { main, plot: Some(String::from_utf8(plot).expect("ASCII")), summary: Vec::new(), notes })
}

/// Seed for replica `i` of a run with base seed `seed`.
pub fn replica_seed(seed: u64, i: u64) -> u64 {
    mix64(seed ^ mix64(i))
}
