use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use frogmodel::cli::{
    execute, AnalyticsConfig, Command, ExperimentConfig, LabelMode, SampleTreeConfig, Sampler, Seeds, SimMode,
    SimulateConfig,
};
use frogmodel::gw::OffspringDistribution;
use frogmodel::search::{DminRule, SearchCaps, SweepConfig};
use frogmodel::sim::{SimConfig, TreeFamily};
use frogmodel::Error;

#[derive(Parser)]
#[command(name = "frogmodel", version, about = "Frog models and branching Markov chains on trees")]
struct Cli {
    /// Run the experiment described by a JSON config instead of flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the resolved config as JSON and exit.
    #[arg(long, global = true)]
    dump_config: bool,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a Galton-Watson tree and write its edge list.
    SampleTree {
        /// Offspring law, e.g. `p0=0.1,p2=0.9`, `probs=0,0.5,0.5` or JSON.
        #[arg(long)]
        offspring: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        depth: u32,
        #[arg(long)]
        decomposed: bool,
        /// Sleeping-frog law, comma-separated probabilities.
        #[arg(long, default_value = "1")]
        frogs: String,
        #[arg(long, value_enum, default_value_t = Labels::None)]
        labels: Labels,
        #[arg(long)]
        truncate: Option<u32>,
        #[arg(long)]
        erase_bushes: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run replicas of a frog model or branching Markov chain.
    Simulate {
        #[arg(long, value_enum, default_value_t = Mode::Fm)]
        mode: Mode,
        /// Regular tree with this degree.
        #[arg(long, conflicts_with = "offspring")]
        regular: Option<u32>,
        /// Galton-Watson tree with this offspring law.
        #[arg(long)]
        offspring: Option<String>,
        #[arg(long, default_value_t = 0)]
        tree_seed: u64,
        #[arg(long, default_value = "1")]
        frogs: String,
        #[arg(long, default_value_t = 1)]
        seed_base: u64,
        #[arg(long, default_value_t = 100)]
        replicas: usize,
        #[arg(long, default_value_t = 1000)]
        steps: u64,
        #[arg(long, default_value_t = 10_000_000)]
        particle_cap: u64,
        #[arg(long, default_value_t = 12)]
        stretch_horizon: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Generating-function checks or spectral-radius tables.
    Analytics {
        #[arg(long, value_enum, default_value_t = Op::GfSweep)]
        op: Op,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        /// Largest branching number in the `rho` table.
        #[arg(long, default_value_t = 10)]
        d_max: usize,
        #[arg(long, default_value_t = 50)]
        z_points: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Smallest certifiable branching number over a grid of p1.
    SweepCd {
        #[arg(long, default_value_t = 0.01)]
        mesh: f64,
        #[arg(long, default_value_t = 40)]
        d_cap: usize,
        #[arg(long, default_value_t = 50)]
        n_cap: usize,
        #[arg(long, default_value_t = 0.0)]
        p0: f64,
        #[arg(long, default_value_t = 64)]
        k_max: usize,
        #[arg(long, default_value_t = 1e-4)]
        epsilon: f64,
        /// Use the original law's smallest branching number for bushes.
        #[arg(long)]
        original_dmin: bool,
        /// Also write `p1 c_d` pairs here.
        #[arg(long)]
        plot_data: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Labels {
    None,
    Stretches,
    Types,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    GfSweep,
    Rho,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Fm,
    #[value(alias = "fm_prime")]
    FmPrime,
    Bmc,
    #[value(alias = "bmc_radial")]
    BmcRadial,
    Coupled,
}

fn probs(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Config(format!("bad probability '{s}': {e}"))))
        .collect()
}

fn from_flags(cmd: Cmd) -> Result<ExperimentConfig, Error> {
    let (command, output, plot_data) = match cmd {
        Cmd::SampleTree { offspring, seed, depth, decomposed, frogs, labels, truncate, erase_bushes, out } => (
            Command::SampleTree(SampleTreeConfig {
                offspring: OffspringDistribution::parse(&offspring)?.probs().to_vec(),
                seed,
                depth,
                sampler: if decomposed { Sampler::Decomposed } else { Sampler::Standard },
                frogs: probs(&frogs)?,
                labels: match labels {
                    Labels::None => LabelMode::None,
                    Labels::Stretches => LabelMode::Stretches,
                    Labels::Types => LabelMode::Types,
                },
                truncate,
                erase_bushes,
                bush_cap: frogmodel::gw::DEFAULT_BUSH_CAP,
            }),
            out.out,
            None,
        ),
        Cmd::Simulate {
            mode,
            regular,
            offspring,
            tree_seed,
            frogs,
            seed_base,
            replicas,
            steps,
            particle_cap,
            stretch_horizon,
            out,
        } => {
            let tree = match (regular, offspring) {
                (Some(degree), _) => TreeFamily::Regular { degree },
                (None, Some(o)) => TreeFamily::GaltonWatson { probs: OffspringDistribution::parse(&o)?.probs().to_vec() },
                (None, None) => return Err(Error::Config("give --regular or --offspring".into())),
            };
            (
                Command::Simulate(SimulateConfig {
                    mode: match mode {
                        Mode::Fm => SimMode::Fm,
                        Mode::FmPrime => SimMode::FmPrime,
                        Mode::Bmc => SimMode::Bmc,
                        Mode::BmcRadial => SimMode::BmcRadial,
                        Mode::Coupled => SimMode::Coupled,
                    },
                    tree,
                    tree_seed,
                    frogs: probs(&frogs)?,
                    seeds: Seeds::Range { base: seed_base, count: replicas },
                    sim: SimConfig { step_cap: steps, particle_cap, trajectory_stride: 0 },
                    stretch_horizon,
                }),
                out.out,
                None,
            )
        }
        Cmd::Analytics { op, n_max, d_max, z_points, out } => {
            let a = match op {
                Op::GfSweep => AnalyticsConfig::GfSweep { n_max, z_points },
                Op::Rho => AnalyticsConfig::Rho { d_max, n_max },
            };
            (Command::Analytics(a), out.out, None)
        }
        Cmd::SweepCd { mesh, d_cap, n_cap, p0, k_max, epsilon, original_dmin, plot_data, out } => (
            Command::SweepCd(SweepConfig {
                mesh,
                d_cap,
                p0,
                caps: SearchCaps { n_cap, k_max, epsilon, ..SearchCaps::default() },
                rule: if original_dmin { DminRule::Original } else { DminRule::Backbone },
            }),
            out.out,
            plot_data,
        ),
    };
    Ok(ExperimentConfig { command, output, plot_data })
}

fn run(cli: Cli) -> Result<(), Error> {
    if let Ok(threads) = std::env::var("FROGMODEL_THREADS") {
        let n: usize = threads
            .parse()
            .map_err(|_| Error::Config(format!("FROGMODEL_THREADS='{threads}' is not a number")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let cfg = match (cli.config, cli.command) {
        (Some(path), _) => ExperimentConfig::from_json(&std::fs::read_to_string(path)?)?,
        (None, Some(cmd)) => from_flags(cmd)?,
        (None, None) => return Err(Error::Config("give a subcommand or --config".into())),
    };
    if cli.dump_config {
        println!("{}", serde_json::to_string_pretty(&cfg)?);
        return Ok(());
    }
    let output = execute(&cfg)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, &output.main)?,
        None => print!("{}", output.main),
    }
    if let (Some(path), Some(plot)) = (&cfg.plot_data, &output.plot) {
        std::fs::write(path, plot)?;
    }
    // Keep standard output parseable when the table goes there.
    for line in &output.summary {
        if cfg.output.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
    for note in &output.notes {
        eprintln!("{note}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
