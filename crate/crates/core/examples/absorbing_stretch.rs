//! Branching random walk on a finite path that freezes particles at both
//! ends, against the generating-function formula for the frozen mass.
//!
//! Run with `cargo run --release --example absorbing_stretch`.

use frogmodel::analytics::{expected_frozen, radius, Target};
use frogmodel::law::DiscreteLaw;
use frogmodel::sim::absorbing_stretch_bmc;

fn main() -> frogmodel::Result<()> {
    for n in [3usize, 5, 8] {
        let mu_bar = 1.0 + 0.6 * (radius(n).min(2.0) - 1.0);
        let law = DiscreteLaw::bernoulli(mu_bar - 1.0)?.shifted(1);
        let e = absorbing_stretch_bmc(n, 1, &law, 20_000, n as u64, 10_000_000)?;
        println!(
            "N = {n}, mu_bar = {mu_bar:.4}: at 0 {:.4} ± {:.4} (exact {:.4}), at N {:.4} ± {:.4} (exact {:.4})",
            e.at_zero.mean,
            e.at_zero.se,
            expected_frozen(n, 1, Target::Zero, mu_bar)?,
            e.at_end.mean,
            e.at_end.se,
            expected_frozen(n, 1, Target::End, mu_bar)?
        );
    }
    Ok(())
}
