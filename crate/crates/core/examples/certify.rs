//! Certified frog densities for trees with stretches, and for a law with
//! leaves handled through its backbone.
//!
//! Run with `cargo run --release --example certify`.

use frogmodel::gw::OffspringDistribution;
use frogmodel::search::{certify_bush_case, certify_stretch_case, max_feasible_n, DminRule, SearchCaps};

fn main() -> frogmodel::Result<()> {
    let caps = SearchCaps::default();
    for d in [8, 9, 16, 23] {
        println!("d = {d}: truncation lengths up to {}", max_feasible_n(d));
        for p1 in [0.01, 0.3, 0.6] {
            match certify_stretch_case(p1, d, &caps)? {
                Some(r) => println!("  p1 = {p1}: N = {}, eta_bar = {:.4e}, mu_bar = {:.6}", r.n, r.eta_bar, r.mu_bar),
                None => println!("  p1 = {p1}: no certificate"),
            }
        }
    }

    let dist = OffspringDistribution::parse("p0=0.01,p1=0.1,p30=0.89")?;
    for rule in [DminRule::Backbone, DminRule::Original] {
        match certify_bush_case(&dist, &caps, rule)? {
            Some(r) => {
                let b = r.bush.expect("bush parameters");
                println!(
                    "{rule:?}: d = {}, N = {}, eta_bar = {:.3e} (density factor {:.3}, backbone p1 {:.4})",
                    r.d_min, r.n, r.eta_bar, b.density_factor, b.p_hat1
                );
            }
            None => println!("{rule:?}: no certificate"),
        }
    }
    Ok(())
}
