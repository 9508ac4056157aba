//! Samples a Galton-Watson tree, labels its stretches, truncates them and
//! erases bushes, printing the edge list after each step.
//!
//! Run with `cargo run --example sample_tree`.

use std::io::stdout;

use frogmodel::gw::{erase_bushes, label_stretches, truncate_stretches, write_edge_list, OffspringDistribution, RootedTree};
use frogmodel::sim::{frog_count, FrogInit};

fn main() -> frogmodel::Result<()> {
    let dist = OffspringDistribution::parse("p0=0.1,p1=0.4,p3=0.5")?;
    let init = FrogInit::new(vec![0.5, 0.5])?;
    let (seed, depth) = (11, 6);
    let tree = RootedTree::galton_watson(&dist, seed, 40);
    println!("extinction probability {:.4}, mean bush size {:.4}", dist.extinction_prob(), dist.expected_bush_size()?);

    let map = label_stretches(&tree, depth);
    println!("# {} complete stretches within depth {depth}", map.stretches.len());
    write_edge_list(&tree, depth, Some(&map.labels), &|v| frog_count(&tree, &init, seed, v), &mut stdout())?;

    let short = truncate_stretches(&tree, &map, 2)?;
    println!("# stretches truncated to length 2");
    write_edge_list(&short, depth, None, &|v| frog_count(&short, &init, seed, v), &mut stdout())?;

    let bushless = erase_bushes(&tree, depth + 10, &init, seed, 100_000)?;
    println!("# bushes erased, their frogs moved to the backbone");
    let t = &bushless.tree;
    write_edge_list(t, depth, None, &|v| frog_count(t, &init, seed, v), &mut stdout())?;
    Ok(())
}
