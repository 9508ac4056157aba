//! Spectral radii of simple random walk on trees and on finite pieces of
//! them.

use std::f64::consts::PI;

use rustc_hash::FxHashMap;

use crate::error::{domain, Error, Result};
use crate::gw::{RootedTree, SphericalProfile, VertexId};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

/// Spectral radius `2 sqrt(d) / (d + 1)` of simple random walk on the
/// `(d+1)`-regular tree.
pub fn rho_homogeneous(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(domain("d must be at least 2"));
    }
    let d = d as f64;
    Ok(2.0 * d.sqrt() / (d + 1.0))
}

/// Spectral radius after replacing each edge by a path of `n` edges:
/// `cos(arccos(rho) / n)`.
pub fn rho_subdivision(rho: f64, n: usize) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(domain(format!("rho = {rho} outside (0, 1)")));
    }
    if n < 1 {
        return Err(domain("subdivision length must be at least 1"));
    }
    Ok((rho.acos() / n as f64).cos())
}

/// A sparse non-negative matrix with row sums at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstochasticMatrix {
    rows: Vec<Vec<(usize, f64)>>,
}

impl SubstochasticMatrix {
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(domain("empty matrix"));
        }
        for (i, row) in rows.iter().enumerate() {
            let mut total = 0.0;
            for &(j, p) in row {
                if j >= n {
                    return Err(domain(format!("column {j} out of range in row {i}")));
                }
                if !(p >= 0.0) || !p.is_finite() {
                    return Err(domain(format!("entry ({i}, {j}) = {p} is negative")));
                }
                total += p;
            }
            if total > 1.0 + 1e-12 {
                return Err(domain(format!("row {i} sums to {total}")));
            }
        }
        Ok(Self { rows })
    }

    pub fn from_dense(dense: &[Vec<f64>]) -> Result<Self> {
        let rows = dense
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &p)| p != 0.0).map(|(j, &p)| (j, p)).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = row.iter().map(|&(j, p)| p * v[j]).sum();
        }
    }
}

/// Estimate of a spectral radius with a certified bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEstimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub residual: f64,
    pub descriptor: String,
}

/// Perron root of an irreducible substochastic matrix with tolerance
/// [`DEFAULT_TOL`].
pub fn spectral_radius_finite(kernel: &SubstochasticMatrix) -> Result<SpectralEstimate> {
    spectral_radius_with(kernel, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

/// Power iteration on `(I + A) / 2`, which removes the periodicity of walks
/// on bipartite graphs. The min and max of `(Bv)_i / v_i` bracket the
/// Perron root of `B`; iteration stops once the bracket, mapped back to
/// `A`, is narrower than `tol`.
pub fn spectral_radius_with(kernel: &SubstochasticMatrix, tol: f64, max_iter: usize) -> Result<SpectralEstimate> {
    let n = kernel.dim();
    let mut v = vec![1.0; n];
    let mut av = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        kernel.apply(&v, &mut av);
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        let mut top = 0.0f64;
        for i in 0..n {
            let b = 0.5 * (v[i] + av[i]);
            if v[i] > 0.0 {
                let r = b / v[i];
                lo = lo.min(r);
                hi = hi.max(r);
            }
            av[i] = b;
            top = top.max(b);
        }
        if top == 0.0 {
            return Err(domain("iteration vanished; matrix is nilpotent"));
        }
        for (x, &b) in v.iter_mut().zip(&av) {
            *x = b / top;
        }
        residual = 2.0 * (hi - lo);
        if residual <= tol {
            let value = (hi + lo) - 1.0;
            return Ok(SpectralEstimate {
                value,
                lower: (2.0 * lo - 1.0).max(0.0),
                upper: 2.0 * hi - 1.0,
                iterations: it,
                residual,
                descriptor: format!("power iteration, {n} states"),
            });
        }
    }
    Err(Error::NonConvergence { iterations: max_iter, residual })
}

/// Simple random walk on the ball of radius `radius` around the root,
/// killed on leaving it. Returns the kernel and the vertex of each state.
pub fn ball_kernel(tree: &RootedTree, radius: u32) -> Result<(SubstochasticMatrix, Vec<VertexId>)> {
    let vertices = tree.explore(radius);
    let index: FxHashMap<VertexId, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut rows = Vec::with_capacity(vertices.len());
    for &v in &vertices {
        let deg = tree.degree(v);
        if deg == 0 {
            rows.push(Vec::new());
            continue;
        }
        let p = 1.0 / deg as f64;
        let mut row = Vec::new();
        if let Some(u) = tree.parent(v) {
            row.push((index[&u], p));
        }
        if tree.depth(v) < radius {
            row.extend(tree.children(v).map(|c| (index[&c], p)));
        }
        rows.push(row);
    }
    Ok((SubstochasticMatrix::from_rows(rows)?, vertices))
}

/// Distance-from-root chain of simple random walk on a spherically
/// symmetric tree, killed on leaving the ball of radius `radius`. Its
/// spectral radius equals that of the full ball kernel.
pub fn radial_kernel(profile: SphericalProfile, radius: u32) -> Result<SubstochasticMatrix> {
    let r = radius as usize;
    let mut rows = Vec::with_capacity(r + 1);
    for k in 0..=r {
        let c = profile.children_at(k) as f64;
        let deg = if k == 0 { c } else { c + 1.0 };
        let mut row = Vec::new();
        if deg == 0.0 {
            rows.push(row);
            continue;
        }
        if k > 0 {
            row.push((k - 1, 1.0 / deg));
        }
        if k < r && c > 0.0 {
            row.push((k + 1, c / deg));
        }
        rows.push(row);
    }
    SubstochasticMatrix::from_rows(rows)
}

/// Spectral radii of the walk restricted to balls of the given radii
/// around the root; each is a lower bound for the tree's spectral radius.
pub fn rho_tree_lower_bounds(tree: &RootedTree, radii: &[u32]) -> Result<Vec<SpectralEstimate>> {
    radii
        .iter()
        .map(|&r| {
            if r == 0 {
                return Err(domain("radius must be at least 1"));
            }
            let mut est = match tree.spherical_profile() {
                Some(profile) => {
                    let mut e = spectral_radius_finite(&radial_kernel(profile, r)?)?;
                    e.descriptor = format!("radial chain, ball radius {r}");
                    e
                }
                None => {
                    let (kernel, _) = ball_kernel(tree, r)?;
                    let mut e = spectral_radius_finite(&kernel)?;
                    e.descriptor = format!("ball radius {r}, {} vertices", kernel.dim());
                    e
                }
            };
            est.value = est.value.clamp(est.lower, est.upper);
            Ok(est)
        })
        .collect()
}

/// `cos(pi / (n + 1))`: spectral radius of simple random walk on a path of
/// `n` vertices killed at both ends.
pub fn path_spectral_radius(n: usize) -> f64 {
    (PI / (n as f64 + 1.0)).cos()
}

/// `|boundary edges of F| / sum of degrees in F` for a finite vertex set.
pub fn isoperimetric_ratio(tree: &RootedTree, subset: &[VertexId]) -> Result<f64> {
    if subset.is_empty() {
        return Err(domain("empty vertex set"));
    }
    let set: rustc_hash::FxHashSet<VertexId> = subset.iter().copied().collect();
    let mut volume = 0u64;
    let mut boundary = 0u64;
    for &v in &set {
        if v as usize >= tree.len() {
            return Err(domain(format!("vertex {v} is not materialized")));
        }
        volume += tree.degree(v) as u64;
        if let Some(p) = tree.parent(v) {
            boundary += u64::from(!set.contains(&p));
        }
        boundary += tree.children(v).filter(|c| !set.contains(c)).count() as u64;
    }
    if volume == 0 {
        return Err(domain("vertex set has zero volume"));
    }
    Ok(boundary as f64 / volume as f64)
}

/// The ball of radius `radius` around the root.
pub fn ball(tree: &RootedTree, radius: u32) -> Vec<VertexId> {
    tree.explore(radius)
}
