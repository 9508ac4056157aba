//! Frog model runs on regular trees: the single-walker case, and the
//! growth of root visits with one sleeping frog per vertex.
//!
//! Run with `cargo run --release --example frog_model`.

use frogmodel::gw::RootedTree;
use frogmodel::sim::{recurrence_indicator, simulate_fm, FrogInit, SimConfig, TreeFamily};
use frogmodel::stats::MeanEstimate;

fn main() -> frogmodel::Result<()> {
    // A lone walker on the 5-regular tree returns with probability 1/3.
    let tree = RootedTree::regular(5, 0)?;
    let alone = FrogInit::constant(0);
    let cfg = SimConfig::with_steps(200);
    let nu: Vec<f64> = (0..2000).map(|s| simulate_fm(&tree, &alone, s, &cfg).nu as f64).collect();
    let est = MeanEstimate::from_samples(&nu);
    println!("lone walker on T_5: mean root visits {:.4} +- {:.4}", est.mean, est.se);

    let one = FrogInit::constant(1);
    for degree in [3, 6] {
        let started = std::time::Instant::now();
        let ind = recurrence_indicator(
            &TreeFamily::Regular { degree },
            &one,
            if degree == 3 { &[4, 8, 16, 32] } else { &[4, 8, 16] },
            40,
            7,
            20_000_000,
        )?;
        println!("T_{degree}: growing = {} ({:.2?})", ind.growing, started.elapsed());
        for row in &ind.rows {
            println!(
                "  steps {:3}  mean {:10.2} +- {:8.2}  median {:8.1}  (n = {})",
                row.step_cap, row.nu.mean, row.nu.se, row.q50, row.nu.n
            );
        }
        println!("  slopes {:?}, truncated {}", ind.slopes, ind.truncated);
    }
    Ok(())
}
