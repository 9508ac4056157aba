//! Stretch labeling, truncation and bush erasure.

use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::gw::tree::{ExplicitNode, RootedTree, VertexId, ROOT};
use crate::sim::FrogInit;

/// Default cap on the size of a single bush during erasure.
pub const DEFAULT_BUSH_CAP: usize = 1_000_000;

/// Per-vertex label. Stretch labels (`Bs`, `S`, `Es`, `N`) and type labels
/// (`G`, `B`, `Br`) come from different passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    /// Has a descendant at the horizon depth.
    G,
    /// Not type `G`, parent not type `G` either.
    B,
    /// Not type `G`, parent is type `G`: the root of a bush.
    Br,
    /// First vertex of a stretch (also used for stretches of length 1).
    Bs,
    /// Interior stretch vertex.
    S,
    /// Last vertex of a stretch.
    Es,
    /// Not a stretch vertex.
    N,
    /// Depends on children that lie beyond the explored region.
    Unlabeled,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::G => "g",
            Label::B => "b",
            Label::Br => "b_r",
            Label::Bs => "bs",
            Label::S => "s",
            Label::Es => "es",
            Label::N => "n",
            Label::Unlabeled => "-",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Labels of the materialized vertices, indexed by vertex id. Vertices
/// outside the labeled region read as `Unlabeled`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Labeling(Vec<Label>);

impl Labeling {
    pub fn get(&self, v: VertexId) -> Label {
        self.0.get(v as usize).copied().unwrap_or(Label::Unlabeled)
    }

    pub fn count(&self, label: Label) -> usize {
        self.0.iter().filter(|&&l| l == label).count()
    }
}

/// A maximal run of degree-2 non-root vertices, all inside the explored
/// region. `start` is the vertex nearest the root; `start == end` when
/// `len == 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stretch {
    pub start: VertexId,
    pub end: VertexId,
    pub len: u32,
}

#[derive(Debug, Clone, Default)]
pub struct StretchMap {
    pub labels: Labeling,
    pub stretches: Vec<Stretch>,
    pub horizon: u32,
}

impl StretchMap {
    /// A map without stretches.
    pub fn empty(horizon: u32) -> Self {
        Self { labels: Labeling::default(), stretches: Vec::new(), horizon }
    }

    /// Index from stretch start and end vertices to stretch number.
    pub fn endpoint_index(&self) -> (FxHashMap<VertexId, usize>, FxHashMap<VertexId, usize>) {
        let mut starts = FxHashMap::default();
        let mut ends = FxHashMap::default();
        for (i, s) in self.stretches.iter().enumerate() {
            starts.insert(s.start, i);
            ends.insert(s.end, i);
        }
        (starts, ends)
    }
}

fn stretch_status(tree: &RootedTree, v: VertexId, horizon: u32) -> Option<bool> {
    if v == ROOT {
        return Some(false);
    }
    if tree.depth(v) >= horizon || !tree.children_determined(v) {
        return None;
    }
    Some(tree.child_count(v) == 1)
}

/// Labels every vertex up to depth `horizon` as start (`bs`), interior
/// (`s`) or end (`es`) of a stretch, or `n`. The root never belongs to a
/// stretch.
pub fn label_stretches(tree: &RootedTree, horizon: u32) -> StretchMap {
    let order = tree.explore(horizon);
    let mut labels = vec![Label::Unlabeled; tree.len()];
    let mut status: FxHashMap<VertexId, Option<bool>> = FxHashMap::default();
    for &v in &order {
        status.insert(v, stretch_status(tree, v, horizon));
    }
    let known = |v: VertexId| status.get(&v).copied().flatten();
    for &v in &order {
        labels[v as usize] = match known(v) {
            None => Label::Unlabeled,
            Some(false) => Label::N,
            Some(true) => {
                let parent = tree.parent(v).expect("stretch vertices are not the root");
                if known(parent) == Some(false) {
                    Label::Bs
                } else {
                    let child = tree.children(v).start;
                    match known(child) {
                        None => Label::Unlabeled,
                        Some(false) => Label::Es,
                        Some(true) => Label::S,
                    }
                }
            }
        };
    }
    let mut stretches = Vec::new();
    for &v in &order {
        if labels[v as usize] != Label::Bs {
            continue;
        }
        let mut end = v;
        let mut len = 1;
        let complete = loop {
            let child = tree.children(end).start;
            match known(child) {
                None => break false,
                Some(false) => break true,
                Some(true) => {
                    end = child;
                    len += 1;
                }
            }
        };
        if complete {
            stretches.push(Stretch { start: v, end, len });
        }
    }
    StretchMap { labels: Labeling(labels), stretches, horizon }
}

/// Copies the region explored by `map`, keeping at most `n` vertices of
/// every complete stretch. Vertex keys and frog overrides are preserved.
pub fn truncate_stretches(tree: &RootedTree, map: &StretchMap, n: u32) -> Result<RootedTree> {
    if n == 0 {
        return Err(Error::Domain("truncation length must be at least 1".into()));
    }
    // The n-th vertex of a longer stretch adopts the child of its last vertex.
    let mut redirect: FxHashMap<VertexId, VertexId> = FxHashMap::default();
    for s in map.stretches.iter().filter(|s| s.len > n) {
        let mut u = s.start;
        for _ in 1..n {
            u = tree.children(u).start;
        }
        redirect.insert(u, tree.children(s.end).start);
    }
    let mut specs: Vec<ExplicitNode> = Vec::new();
    let mut queue: Vec<(VertexId, Option<usize>)> = vec![(ROOT, None)];
    let mut head = 0;
    while head < queue.len() {
        let (orig, parent) = queue[head];
        head += 1;
        let idx = specs.len();
        let within = tree.depth(orig) < map.horizon && tree.children_determined(orig);
        specs.push(ExplicitNode {
            parent,
            key: tree.key(orig),
            expanded: within,
            frogs: tree.frog_override(orig),
        });
        if !within {
            continue;
        }
        match redirect.get(&orig) {
            Some(&after) => queue.push((after, Some(idx))),
            None => queue.extend(tree.children(orig).map(|c| (c, Some(idx)))),
        }
    }
    Ok(RootedTree::explicit(specs, tree.seed(), map.horizon))
}

/// Labels vertices up to `horizon` as `g`, `b_r` or `b`.
pub fn classify_types(tree: &RootedTree, horizon: u32) -> Labeling {
    let order = tree.explore(horizon);
    let mut reaches = vec![false; tree.len()];
    for &v in order.iter().rev() {
        let r = tree.depth(v) == horizon
            || (tree.depth(v) < horizon && tree.children(v).any(|c| reaches[c as usize]));
        reaches[v as usize] = r;
    }
    let mut labels = vec![Label::Unlabeled; tree.len()];
    for &v in &order {
        labels[v as usize] = if reaches[v as usize] {
            Label::G
        } else if tree.parent(v).is_some_and(|p| reaches[p as usize]) {
            Label::Br
        } else {
            Label::B
        };
    }
    Labeling(labels)
}

/// Tree with every bush removed; frogs of a bush are moved to the `g`
/// vertex it hangs from.
#[derive(Debug)]
pub struct Bushless {
    pub tree: RootedTree,
    /// Frog mass per vertex of `tree`, also attached as frog overrides.
    pub mass: Vec<u32>,
}

/// Removes every bush within `horizon` and moves its frogs to its
/// attachment vertex. The root's own site holds no frogs.
pub fn erase_bushes(
    tree: &RootedTree,
    horizon: u32,
    init: &FrogInit,
    seed: u64,
    bush_cap: usize,
) -> Result<Bushless> {
    let types = classify_types(tree, horizon);
    let own = |v: VertexId| -> u64 {
        match tree.frog_override(v) {
            Some(c) => c as u64,
            None if v == ROOT => 0,
            None => init.count_at(seed, tree.key(v)) as u64,
        }
    };
    let mut specs: Vec<ExplicitNode> = Vec::new();
    let mut mass = Vec::new();
    let mut queue: Vec<(VertexId, Option<usize>)> = vec![(ROOT, None)];
    let mut head = 0;
    while head < queue.len() {
        let (v, parent) = queue[head];
        head += 1;
        let idx = specs.len();
        let mut m = own(v);
        let inside = tree.depth(v) < horizon;
        if inside {
            for c in tree.children(v) {
                match types.get(c) {
                    Label::G => queue.push((c, Some(idx))),
                    _ => m += bush_mass(tree, c, horizon, bush_cap, &own)?,
                }
            }
        }
        let m = u32::try_from(m).map_err(|_| Error::Domain("frog mass overflows u32".into()))?;
        mass.push(m);
        specs.push(ExplicitNode {
            parent,
            key: tree.key(v),
            expanded: inside && types.get(v) == Label::G,
            frogs: Some(m),
        });
    }
    Ok(Bushless { tree: RootedTree::explicit(specs, tree.seed(), horizon), mass })
}

fn bush_mass(
    tree: &RootedTree,
    root: VertexId,
    horizon: u32,
    cap: usize,
    own: &dyn Fn(VertexId) -> u64,
) -> Result<u64> {
    let mut stack = vec![root];
    let mut size = 0usize;
    let mut total = 0u64;
    while let Some(v) = stack.pop() {
        size += 1;
        if size > cap {
            return Err(Error::BushCapExceeded { cap });
        }
        total += own(v);
        if tree.depth(v) < horizon {
            stack.extend(tree.children(v));
        }
    }
    Ok(total)
}
