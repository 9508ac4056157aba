//! Smallest certifiable branching number as a function of the one-child
//! probability, written as CSV and summarized by plateaus.
//!
//! Run with `cargo run --release --example cd_sweep`.

use std::io::stdout;

use frogmodel::search::{plateaus, sweep_cd, write_plot_data, SweepConfig};

fn main() -> frogmodel::Result<()> {
    let result = sweep_cd(&SweepConfig::default())?;
    for p in plateaus(&result.rows) {
        println!("c_d = {:2} for p1 in [{}, {}] ({} points)", p.c_d, p.p1_from, p.p1_to, p.points);
    }
    for w in &result.warnings {
        println!("warning: {w}");
    }
    println!("\np1 c_d");
    write_plot_data(&result, &mut stdout())?;
    Ok(())
}
