//! Spectral radii: regular trees, subdivided trees and ball estimates on a
//! sampled Galton-Watson tree.
//!
//! Run with `cargo run --release --example spectral_radius`.

use frogmodel::analytics::{rho_homogeneous, rho_subdivision, rho_tree_lower_bounds};
use frogmodel::gw::{OffspringDistribution, RootedTree};

fn main() -> frogmodel::Result<()> {
    for d in [2, 4, 9] {
        let rho = rho_homogeneous(d)?;
        let sub: Vec<String> = (1..=4).map(|n| rho_subdivision(rho, n).map(|r| format!("{r:.5}"))).collect::<Result<_, _>>()?;
        println!("d = {d}: rho = {rho:.5}, subdivided by 1..4: {}", sub.join(" "));
    }

    let t5 = RootedTree::regular(5, 0)?;
    for e in rho_tree_lower_bounds(&t5, &[5, 10, 20, 40])? {
        println!("T_5 {}: {:.6} (upper bound 0.8)", e.descriptor, e.value);
    }

    let gw = RootedTree::galton_watson(&OffspringDistribution::parse("p1=0.3,p2=0.4,p4=0.3")?, 5, 30);
    for e in rho_tree_lower_bounds(&gw, &[2, 4, 6, 8])? {
        println!("Galton-Watson {}: {:.6} in [{:.6}, {:.6}]", e.descriptor, e.value, e.lower, e.upper);
    }
    Ok(())
}
