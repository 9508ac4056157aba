//! The frog model with stretches replaced by their exit laws, against the
//! plain frog model on the same tree.
//!
//! Run with `cargo run --release --example stretches_fm_prime`.

use frogmodel::gw::{label_stretches, OffspringDistribution, RootedTree};
use frogmodel::sim::{simulate_fm, simulate_fm_prime, FrogInit, SimConfig};
use frogmodel::stats::MeanEstimate;

fn main() -> frogmodel::Result<()> {
    let tree = RootedTree::galton_watson(&OffspringDistribution::parse("p1=0.6,p3=0.4")?, 2, 40);
    let map = label_stretches(&tree, 14);
    let mut by_len = std::collections::BTreeMap::new();
    for s in &map.stretches {
        *by_len.entry(s.len).or_insert(0) += 1;
    }
    println!("{} stretches within depth 14; count by length {by_len:?}", map.stretches.len());

    let init = FrogInit::bernoulli(0.2)?;
    let cfg = SimConfig::with_steps(60);
    let runs = 400u64;
    let plain: Vec<f64> = (0..runs).map(|s| simulate_fm(&tree, &init, s, &cfg).nu as f64).collect();
    let mut woken = 0;
    let shortcut: Vec<f64> = (0..runs)
        .map(|s| {
            let r = simulate_fm_prime(&tree, &map, &init, s, &cfg);
            woken += r.ledger.stretches_woken;
            r.report.nu as f64
        })
        .collect();
    let (a, b) = (MeanEstimate::from_samples(&plain), MeanEstimate::from_samples(&shortcut));
    println!("root visits in 60 rounds: plain {:.2} ± {:.2}, with exit laws {:.2} ± {:.2}", a.mean, a.se, b.mean, b.se);
    println!("stretches woken per run: {:.2}", woken as f64 / runs as f64);
    Ok(())
}
