//! First-visit generating functions of the ruin chain: closed form against
//! the directly summed series, and the second-order lower bounds.
//!
//! Run with `cargo run --example generating_functions`.

use frogmodel::analytics::{fapprox_lower, first_visit_series, radius, RuinChain, Side};

fn main() -> frogmodel::Result<()> {
    println!("{:>3} {:>8} {:>12} {:>12} {:>10}", "N", "z", "closed", "series", "diff");
    for n in [3usize, 6, 10] {
        for frac in [0.0, 0.5, 0.9] {
            let z = 1.0 + frac * (0.99 * radius(n) - 1.0);
            let closed = RuinChain::new(n, z)?.first_visit(1, n)?;
            let series = first_visit_series(n, 1, n, z, 1e-13)?;
            println!("{n:3} {z:8.5} {closed:12.9} {series:12.9} {:10.2e}", (closed - series).abs());
        }
    }

    // At z = 1 these are ruin probabilities.
    let chain = RuinChain::new(8, 1.0)?;
    println!("\nN = 8, z = 1: F(1, 8) = {}, F(7, 8) = {}", chain.first_visit(1, 8)?, chain.first_visit(7, 8)?);

    println!("\nsecond-order bounds for N = 4 (chain on 0..=5)");
    let n = 4;
    for i in 0..5 {
        let phi = std::f64::consts::PI / (n as f64 + 1.0) * i as f64 / 5.0;
        let chain = RuinChain::new(n + 1, 1.0 / phi.cos())?;
        println!(
            "phi {phi:.4}: near {:.6} <= {:.6}, far {:.6} <= {:.6}",
            fapprox_lower(n, phi, Side::Near)?,
            chain.first_visit(n, n + 1)?,
            fapprox_lower(n, phi, Side::Far)?,
            chain.first_visit(1, n + 1)?
        );
    }
    Ok(())
}
