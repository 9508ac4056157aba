//! Edge-list export.

use std::io::Write;

use crate::error::Result;
use crate::gw::labels::Labeling;
use crate::gw::tree::{RootedTree, VertexId, ROOT};

/// Writes one line `parent child label frogs` per vertex of the region up
/// to `depth`, with vertices numbered breadth-first from 0 at the root
/// (whose parent is written `-`). Output depends only on the realized tree.
pub fn write_edge_list<W: Write>(
    tree: &RootedTree,
    depth: u32,
    labels: Option<&Labeling>,
    frogs: &dyn Fn(VertexId) -> u32,
    out: &mut W,
) -> Result<()> {
    let order = tree.explore(depth);
    let mut ids = rustc_hash::FxHashMap::default();
    for (i, &v) in order.iter().enumerate() {
        ids.insert(v, i);
    }
    for (i, &v) in order.iter().enumerate() {
        let label = labels.map_or("-", |l| l.get(v).as_str());
        match tree.parent(v) {
            Some(p) if v != ROOT => writeln!(out, "{} {} {} {}", ids[&p], i, label, frogs(v))?,
            _ => writeln!(out, "- {} {} {}", i, label, frogs(v))?,
        }
    }
    Ok(())
}
