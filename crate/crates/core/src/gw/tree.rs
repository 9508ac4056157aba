//! Lazily materialized rooted trees.
//!
//! Vertices are stored in an arena; a vertex's children occupy a
//! contiguous id range and are created the first time anything asks for
//! them. Every random choice made while growing the tree comes from a
//! stream keyed by the vertex's path from the root, so the realized tree
//! does not depend on the order in which it is explored.

use std::ops::Range;

use parking_lot::RwLock;
use rand::Rng;
use rand_distr::{Distribution, Geometric};

use crate::error::{domain, Error, Result};
use crate::gw::OffspringDistribution;
use crate::law::DiscreteLaw;
use crate::rng::{child_key, vertex_rng, Stream, ROOT_KEY};

pub type VertexId = u32;
pub const ROOT: VertexId = 0;
const NO_PARENT: u32 = u32::MAX;

/// Growth state used by the decomposed sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Growth {
    /// Draws afresh: marked with probability `p_1`.
    Fresh,
    /// One child; `r` more one-child vertices follow below it.
    Chain(u32),
    /// Last vertex of a run of one-child vertices: draws from `p_k / (1 - p_1)`.
    ChainEnd,
}

#[derive(Debug, Clone)]
struct Node {
    parent: u32,
    depth: u32,
    key: u64,
    first_child: u32,
    n_children: u32,
    expanded: bool,
    growth: Growth,
    /// Length `1 + L` of the one-child run started here, for marked vertices.
    mark: Option<u32>,
    frogs: Option<u32>,
}

impl Node {
    fn new(parent: u32, depth: u32, key: u64, growth: Growth) -> Self {
        Self {
            parent,
            depth,
            key,
            first_child: 0,
            n_children: 0,
            expanded: false,
            growth,
            mark: None,
            frogs: None,
        }
    }
}

#[derive(Debug, Clone)]
enum Source {
    GaltonWatson {
        dist: OffspringDistribution,
        law: DiscreteLaw,
    },
    Decomposed {
        dist: OffspringDistribution,
        p1: f64,
        rest: DiscreteLaw,
        run: Option<Geometric>,
    },
    Regular {
        degree: u32,
    },
    /// Fully specified; unexpanded vertices are frontier vertices whose
    /// children are unknown.
    Explicit,
}

/// Child-count profile of a spherically symmetric tree: the root has
/// `root_children` children and every other vertex has `children`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphericalProfile {
    pub root_children: u32,
    pub children: u32,
}

impl SphericalProfile {
    /// Children of a vertex at distance `level` from the root.
    pub fn children_at(&self, level: usize) -> u32 {
        if level == 0 {
            self.root_children
        } else {
            self.children
        }
    }
}

/// A rooted locally finite tree, grown on demand.
#[derive(Debug)]
pub struct RootedTree {
    source: Source,
    seed: u64,
    horizon: u32,
    nodes: RwLock<Vec<Node>>,
}

impl Clone for RootedTree {
    fn clone(&self) -> Self {
        Self {
            source: self.source.clone(),
            seed: self.seed,
            horizon: self.horizon,
            nodes: RwLock::new(self.nodes.read().clone()),
        }
    }
}

/// Node description used to assemble explicit trees.
#[derive(Debug, Clone)]
pub(crate) struct ExplicitNode {
    pub parent: Option<usize>,
    pub key: u64,
    pub expanded: bool,
    pub frogs: Option<u32>,
}

impl RootedTree {
    fn with_source(source: Source, seed: u64, horizon: u32) -> Self {
        Self {
            source,
            seed,
            horizon,
            nodes: RwLock::new(vec![Node::new(NO_PARENT, 0, ROOT_KEY, Growth::Fresh)]),
        }
    }

    /// Galton-Watson tree with offspring law `dist`. `horizon` is the
    /// default exploration depth used by labeling and export.
    pub fn galton_watson(dist: &OffspringDistribution, seed: u64, horizon: u32) -> Self {
        Self::with_source(
            Source::GaltonWatson { dist: dist.clone(), law: dist.law() },
            seed,
            horizon,
        )
    }

    /// Galton-Watson tree grown by first deciding where runs of one-child
    /// vertices start and how long they are. Same law as
    /// [`RootedTree::galton_watson`] but different realizations per seed.
    pub fn decomposed(dist: &OffspringDistribution, seed: u64, horizon: u32) -> Result<Self> {
        let p1 = dist.p(1);
        if p1 >= 1.0 {
            return Err(domain("decomposed sampling needs p_1 < 1"));
        }
        let rest = dist.without_ones()?.law();
        let run = if p1 > 0.0 {
            Some(Geometric::new(1.0 - p1).map_err(|e| domain(e.to_string()))?)
        } else {
            None
        };
        Ok(Self::with_source(
            Source::Decomposed { dist: dist.clone(), p1, rest, run },
            seed,
            horizon,
        ))
    }

    /// Regular tree where every vertex has `degree` neighbours.
    pub fn regular(degree: u32, horizon: u32) -> Result<Self> {
        if degree < 2 {
            return Err(domain("regular trees need degree >= 2"));
        }
        Ok(Self::with_source(Source::Regular { degree }, 0, horizon))
    }

    /// Tree from adjacency lists: `children[v]` lists the children of `v`,
    /// vertex 0 is the root. Vertices are renumbered breadth-first; the
    /// returned vector maps input index to new id. Every listed vertex is
    /// treated as fully known (leaves are leaves).
    pub fn from_children(children: &[Vec<usize>]) -> Result<(Self, Vec<VertexId>)> {
        if children.is_empty() {
            return Err(domain("empty adjacency"));
        }
        let n = children.len();
        let mut order = vec![0usize];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut specs = vec![ExplicitNode { parent: None, key: ROOT_KEY, expanded: true, frogs: None }];
        let mut map = vec![u32::MAX; n];
        map[0] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            for (i, &c) in children[v].iter().enumerate() {
                if c >= n || seen[c] {
                    return Err(domain(format!("vertex {c} is out of range or has two parents")));
                }
                seen[c] = true;
                map[c] = order.len() as u32;
                specs.push(ExplicitNode {
                    parent: Some(head),
                    key: child_key(specs[head].key, i as u32),
                    expanded: true,
                    frogs: None,
                });
                order.push(c);
            }
            head += 1;
        }
        if order.len() != n {
            return Err(domain("adjacency is not a single tree rooted at 0"));
        }
        Ok((Self::explicit(specs, 0, u32::MAX), map))
    }

    /// Assembles an explicit tree from nodes listed so that every parent
    /// precedes its children and siblings are consecutive.
    pub(crate) fn explicit(specs: Vec<ExplicitNode>, seed: u64, horizon: u32) -> Self {
        let mut nodes: Vec<Node> = Vec::with_capacity(specs.len());
        for (i, s) in specs.iter().enumerate() {
            let (parent, depth) = match s.parent {
                None => (NO_PARENT, 0),
                Some(p) => (p as u32, nodes[p].depth + 1),
            };
            let mut node = Node::new(parent, depth, s.key, Growth::Fresh);
            node.expanded = s.expanded;
            node.frogs = s.frogs;
            nodes.push(node);
            if let Some(p) = s.parent {
                let pn = &mut nodes[p];
                if pn.n_children == 0 {
                    pn.first_child = i as u32;
                }
                debug_assert_eq!(pn.first_child + pn.n_children, i as u32);
                pn.n_children += 1;
            }
        }
        Self { source: Source::Explicit, seed, horizon, nodes: RwLock::new(nodes) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn distribution(&self) -> Option<&OffspringDistribution> {
        match &self.source {
            Source::GaltonWatson { dist, .. } | Source::Decomposed { dist, .. } => Some(dist),
            _ => None,
        }
    }

    /// Whether children are created on demand (as opposed to an explicit tree).
    pub fn is_generative(&self) -> bool {
        !matches!(self.source, Source::Explicit)
    }

    /// Spherically symmetric trees: regular trees and Galton-Watson trees
    /// with a deterministic offspring count.
    pub fn spherical_profile(&self) -> Option<SphericalProfile> {
        match &self.source {
            Source::Regular { degree } => Some(SphericalProfile { root_children: *degree, children: degree - 1 }),
            Source::GaltonWatson { dist, .. } => dist.deterministic_count().map(|k| SphericalProfile {
                root_children: k as u32,
                children: k as u32,
            }),
            _ => None,
        }
    }

    /// Number of materialized vertices.
    pub fn len(&self) -> usize {
        self.nodes.read().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        let p = self.nodes.read()[v as usize].parent;
        (p != NO_PARENT).then_some(p)
    }

    pub fn depth(&self, v: VertexId) -> u32 {
        self.nodes.read()[v as usize].depth
    }

    /// Path key of `v`; stable across exploration orders.
    pub fn key(&self, v: VertexId) -> u64 {
        self.nodes.read()[v as usize].key
    }

    /// Explicit per-vertex frog count, if one was attached.
    pub fn frog_override(&self, v: VertexId) -> Option<u32> {
        self.nodes.read()[v as usize].frogs
    }

    /// Length `1 + L` of the one-child run started at `v` by the decomposed
    /// sampler, if `v` was marked. Expands `v`.
    pub fn run_mark(&self, v: VertexId) -> Option<u32> {
        self.children(v);
        self.nodes.read()[v as usize].mark
    }

    /// Children of `v`, creating them if necessary. Frontier vertices of
    /// explicit trees have no children.
    pub fn children(&self, v: VertexId) -> Range<VertexId> {
        {
            let nodes = self.nodes.read();
            let n = &nodes[v as usize];
            if n.expanded || matches!(self.source, Source::Explicit) {
                return n.first_child..n.first_child + n.n_children;
            }
        }
        let mut nodes = self.nodes.write();
        self.expand(&mut nodes, v);
        let n = &nodes[v as usize];
        n.first_child..n.first_child + n.n_children
    }

    /// Children of `v` if they are already known.
    pub fn known_children(&self, v: VertexId) -> Option<Range<VertexId>> {
        let nodes = self.nodes.read();
        let n = &nodes[v as usize];
        n.expanded.then(|| n.first_child..n.first_child + n.n_children)
    }

    /// Whether `v`'s children are known or can be generated.
    pub fn children_determined(&self, v: VertexId) -> bool {
        self.is_generative() || self.nodes.read()[v as usize].expanded
    }

    pub fn child_count(&self, v: VertexId) -> u32 {
        let r = self.children(v);
        r.end - r.start
    }

    /// Number of neighbours of `v`.
    pub fn degree(&self, v: VertexId) -> u32 {
        self.child_count(v) + u32::from(v != ROOT)
    }

    /// Neighbour number `pick(deg)` of `v`, where index 0 is the parent for
    /// non-root vertices. Returns `v` itself if it has no neighbours.
    #[inline]
    pub fn step(&self, v: VertexId, pick: impl FnOnce(u32) -> u32) -> VertexId {
        let (parent, first, count) = {
            let nodes = self.nodes.read();
            let n = &nodes[v as usize];
            if n.expanded || matches!(self.source, Source::Explicit) {
                (n.parent, n.first_child, n.n_children)
            } else {
                drop(nodes);
                let mut nodes = self.nodes.write();
                self.expand(&mut nodes, v);
                let n = &nodes[v as usize];
                (n.parent, n.first_child, n.n_children)
            }
        };
        let has_parent = parent != NO_PARENT;
        let deg = count + u32::from(has_parent);
        if deg == 0 {
            return v;
        }
        let i = pick(deg);
        if has_parent {
            if i == 0 {
                parent
            } else {
                first + i - 1
            }
        } else {
            first + i
        }
    }

    /// Uniform random neighbour of `v`.
    #[inline]
    pub fn random_neighbor<R: Rng + ?Sized>(&self, v: VertexId, rng: &mut R) -> VertexId {
        self.step(v, |deg| rng.random_range(0..deg))
    }

    /// Materializes every vertex at depth `<= depth` and returns them in
    /// breadth-first order (children in index order).
    pub fn explore(&self, depth: u32) -> Vec<VertexId> {
        let mut order = vec![ROOT];
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            if self.depth(v) < depth {
                order.extend(self.children(v));
            }
        }
        order
    }

    fn expand(&self, nodes: &mut Vec<Node>, v: VertexId) {
        let vi = v as usize;
        if nodes[vi].expanded {
            return;
        }
        let key = nodes[vi].key;
        let depth = nodes[vi].depth;
        let (count, child_growth, mark) = match &self.source {
            Source::Explicit => return,
            Source::Regular { degree } => {
                let c = if v == ROOT { *degree } else { degree - 1 };
                (c, Growth::Fresh, None)
            }
            Source::GaltonWatson { law, .. } => {
                let c = match law.as_point() {
                    Some(k) => k,
                    None => law.sample(&mut vertex_rng(self.seed, key, Stream::Offspring)),
                };
                (c, Growth::Fresh, None)
            }
            Source::Decomposed { p1, rest, run, .. } => match nodes[vi].growth {
                Growth::Chain(r) => (1, chain_child(r), None),
                Growth::ChainEnd => (draw(rest, self.seed, key), Growth::Fresh, None),
                Growth::Fresh => {
                    let mut rng = vertex_rng(self.seed, key, Stream::Offspring);
                    if *p1 > 0.0 && rng.random::<f64>() < *p1 {
                        let extra = run.as_ref().expect("p1 > 0").sample(&mut rng) as u32;
                        (1, chain_child(extra), Some(extra + 1))
                    } else {
                        (rest.sample(&mut rng), Growth::Fresh, None)
                    }
                }
            },
        };
        let first = nodes.len() as u32;
        for i in 0..count {
            nodes.push(Node::new(v, depth + 1, child_key(key, i), child_growth));
        }
        let n = &mut nodes[vi];
        n.first_child = first;
        n.n_children = count;
        n.expanded = true;
        n.mark = mark;
    }

    /// Attaches explicit frog counts (indexed by vertex id).
    pub fn set_frog_counts(&self, counts: &[u32]) -> Result<()> {
        let mut nodes = self.nodes.write();
        if counts.len() > nodes.len() {
            return Err(Error::Domain(format!(
                "{} counts for {} materialized vertices",
                counts.len(),
                nodes.len()
            )));
        }
        for (n, &c) in nodes.iter_mut().zip(counts) {
            n.frogs = Some(c);
        }
        Ok(())
    }
}

fn chain_child(remaining: u32) -> Growth {
    if remaining > 0 {
        Growth::Chain(remaining - 1)
    } else {
        Growth::ChainEnd
    }
}

fn draw(law: &DiscreteLaw, seed: u64, key: u64) -> u32 {
    match law.as_point() {
        Some(k) => k,
        None => law.sample(&mut vertex_rng(seed, key, Stream::Offspring)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_degrees() {
        let t = RootedTree::regular(3, 4).unwrap();
        assert_eq!(t.degree(ROOT), 3);
        let c = t.children(ROOT).start;
        assert_eq!(t.degree(c), 3);
        assert_eq!(t.explore(2).len(), 1 + 3 + 6);
    }

    #[test]
    fn realization_is_independent_of_exploration_order() {
        let d = OffspringDistribution::new(vec![0.1, 0.3, 0.4, 0.2]).unwrap();
        let a = RootedTree::galton_watson(&d, 42, 6);
        let b = RootedTree::galton_watson(&d, 42, 6);
        // Walk b depth-first first; breadth-first afterwards must agree.
        fn dfs(t: &RootedTree, v: VertexId, left: u32) {
            if left == 0 {
                return;
            }
            for c in t.children(v).rev() {
                dfs(t, c, left - 1);
            }
        }
        dfs(&b, ROOT, 6);
        let sig = |t: &RootedTree| -> Vec<(u64, u32)> {
            let mut v: Vec<(u64, u32)> = t
                .explore(5)
                .into_iter()
                .map(|v| (t.key(v), t.child_count(v)))
                .collect();
            v.sort_unstable();
            v
        };
        assert_eq!(sig(&a), sig(&b));
    }

    #[test]
    fn step_maps_indices_to_neighbours() {
        let (t, _) = RootedTree::from_children(&[vec![1, 2], vec![3], vec![], vec![]]).unwrap();
        assert_eq!(t.step(ROOT, |_| 1), 2);
        let a = t.children(ROOT).start;
        assert_eq!(t.step(a, |_| 0), ROOT);
        assert_eq!(t.step(a, |_| 1), t.children(a).start);
        let leaf = t.children(ROOT).start + 1;
        assert_eq!(t.degree(leaf), 1);
    }

    #[test]
    fn from_children_rejects_non_trees() {
        assert!(RootedTree::from_children(&[vec![1], vec![0]]).is_err());
        assert!(RootedTree::from_children(&[vec![1], vec![], vec![]]).is_err());
    }

    #[test]
    fn spherical_profiles() {
        assert_eq!(
            RootedTree::regular(5, 1).unwrap().spherical_profile(),
            Some(SphericalProfile { root_children: 5, children: 4 })
        );
        let d = OffspringDistribution::deterministic(2);
        assert!(RootedTree::galton_watson(&d, 1, 1).spherical_profile().is_some());
        let d = OffspringDistribution::new(vec![0.0, 0.5, 0.5]).unwrap();
        assert!(RootedTree::galton_watson(&d, 1, 1).spherical_profile().is_none());
    }

    #[test]
    fn decomposed_marks_runs() {
        let d = OffspringDistribution::new(vec![0.0, 0.5, 0.5]).unwrap();
        let t = RootedTree::decomposed(&d, 3, 10).unwrap();
        for v in t.explore(8) {
            if let Some(len) = t.run_mark(v) {
                let mut u = v;
                for _ in 0..len {
                    assert_eq!(t.child_count(u), 1);
                    u = t.children(u).start;
                }
                assert_ne!(t.child_count(u), 1);
            }
        }
    }
}
