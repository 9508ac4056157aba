//! The frog model run together with the branching chain that dominates
//! it: root visits of the frog model never exceed those of the chain.
//!
//! Run with `cargo run --release --example coupling`.

use frogmodel::gw::{OffspringDistribution, RootedTree};
use frogmodel::sim::{simulate_coupled, FrogInit, SimConfig};

fn main() -> frogmodel::Result<()> {
    let tree = RootedTree::galton_watson(&OffspringDistribution::parse("p2=0.5,p3=0.5")?, 3, 20);
    let init = FrogInit::bernoulli(0.05)?;
    let cfg = SimConfig { step_cap: 150, particle_cap: 20_000_000, trajectory_stride: 50 };
    println!("seed  nu_fm  nu_bmc  awake@0,50,100,150  particles@0,50,100,150");
    for seed in 0..8 {
        let r = simulate_coupled(&tree, &init, seed, &cfg);
        println!(
            "{seed:4}  {:5}  {:6}  {:?}  {:?}{}",
            r.fm.nu,
            r.bmc.nu,
            r.fm.trajectory,
            r.bmc.trajectory,
            if r.comparable { "" } else { "  (capped)" }
        );
    }
    Ok(())
}
