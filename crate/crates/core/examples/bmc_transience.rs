//! Root visits of a branching random walk on the 5-regular tree, below and
//! above the reciprocal spectral radius 1.25.
//!
//! Run with `cargo run --release --example bmc_transience`.

use std::time::Instant;

use frogmodel::gw::RootedTree;
use frogmodel::law::DiscreteLaw;
use frogmodel::sim::simulate_bmc_radial;
use frogmodel::stats::MeanEstimate;

fn main() -> frogmodel::Result<()> {
    let profile = RootedTree::regular(5, 0)?.spherical_profile().expect("regular trees are symmetric");
    let runs = 200;
    for mu_bar in [1.2, 1.35] {
        let law = DiscreteLaw::bernoulli(mu_bar - 1.0)?.shifted(1);
        for cap in [100u64, 400, 1600] {
            let start = Instant::now();
            let nu: Vec<f64> = (0..runs)
                .map(|i| simulate_bmc_radial(profile, &law, cap * 1_000_003 + i, cap).nu)
                .collect();
            let est = MeanEstimate::from_samples(&nu);
            let mut sorted = nu.clone();
            sorted.sort_by(f64::total_cmp);
            println!(
                "mu_bar {mu_bar}: steps {cap:5}  mean visits {:.4e}  median {:.4e}  ({:.2?})",
                est.mean,
                sorted[runs as usize / 2],
                start.elapsed()
            );
        }
    }
    Ok(())
}
