//! The smallest certifiable branching number as a function of `p1`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certify::{certify_bush_case, certify_stretch_case, DminRule, SearchCaps, SearchRecord};
use crate::error::{domain, Result};
use crate::gw::OffspringDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    /// Spacing of the `p1` grid.
    pub mesh: f64,
    /// Largest branching number tried.
    pub d_cap: usize,
    /// Mass at zero children; with `p0 > 0` the law is supported on
    /// `{0, 1, d}` and the bush certification is used.
    pub p0: f64,
    pub caps: SearchCaps,
    pub rule: DminRule,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { mesh: 0.01, d_cap: 40, p0: 0.0, caps: SearchCaps::default(), rule: DminRule::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p1: f64,
    pub p0: f64,
    /// Certificate at the smallest feasible branching number, if any.
    pub record: Option<SearchRecord>,
}

impl SweepRow {
    pub fn c_d(&self) -> Option<usize> {
        self.record.as_ref().map(|r| r.d_min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Places where the curve decreases with `p1`.
    pub warnings: Vec<String>,
}

/// A run of consecutive grid points sharing the same value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub c_d: usize,
    pub p1_from: f64,
    pub p1_to: f64,
    pub points: usize,
}

fn certify_point(p1: f64, d: usize, cfg: &SweepConfig) -> Result<Option<SearchRecord>> {
    if cfg.p0 == 0.0 {
        return certify_stretch_case(p1, d, &cfg.caps);
    }
    let mut probs = vec![0.0; d + 1];
    probs[0] = cfg.p0;
    probs[1] = p1;
    probs[d] = 1.0 - cfg.p0 - p1;
    let dist = OffspringDistribution::new(probs)?;
    certify_bush_case(&dist, &cfg.caps, cfg.rule)
}

/// Grid `mesh, 2 mesh, ...` strictly inside `(0, 1 - p0)`.
pub fn p1_grid(mesh: f64, p0: f64) -> Vec<f64> {
    let steps = ((1.0 - p0) / mesh).round() as usize;
    (1..steps)
        .map(|i| (i as f64 * mesh * 1e12).round() / 1e12)
        .filter(|&p| p > 0.0 && p < 1.0 - p0)
        .collect()
}

/// Finds, for each grid value of `p1`, the smallest `d <= d_cap` that can
/// be certified.
pub fn sweep_cd(cfg: &SweepConfig) -> Result<SweepResult> {
    if !(cfg.mesh > 0.0 && cfg.mesh < 1.0) {
        return Err(domain(format!("mesh {} must lie in (0, 1)", cfg.mesh)));
    }
    if !(0.0..1.0).contains(&cfg.p0) {
        return Err(domain(format!("p0 = {} must lie in [0, 1)", cfg.p0)));
    }
    let rows = p1_grid(cfg.mesh, cfg.p0)
        .into_par_iter()
        .map(|p1| -> Result<SweepRow> {
            for d in 2..=cfg.d_cap {
                if let Some(record) = certify_point(p1, d, cfg)? {
                    return Ok(SweepRow { p1, p0: cfg.p0, record: Some(record) });
                }
            }
            Ok(SweepRow { p1, p0: cfg.p0, record: None })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut warnings = Vec::new();
    let mut last: Option<(f64, usize)> = None;
    for row in &rows {
        let c = row.c_d().unwrap_or(usize::MAX);
        if let Some((p, prev)) = last {
            if c < prev {
                warnings.push(format!("c_d drops from {prev} at p1 = {p} to {c} at p1 = {}", row.p1));
            }
        }
        last = Some((row.p1, c));
    }
    Ok(SweepResult { rows, warnings })
}

/// Maximal runs of equal `c_d` (infeasible points excluded).
pub fn plateaus(rows: &[SweepRow]) -> Vec<Plateau> {
    let mut out: Vec<Plateau> = Vec::new();
    for row in rows {
        let Some(c) = row.c_d() else { continue };
        match out.last_mut() {
            Some(last) if last.c_d == c => {
                last.p1_to = row.p1;
                last.points += 1;
            }
            _ => out.push(Plateau { c_d: c, p1_from: row.p1, p1_to: row.p1, points: 1 }),
        }
    }
    out
}

/// Rounds to 12 significant digits and prints the shortest form.
pub(crate) fn fmt_real(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().expect("parses its own output");
    rounded.to_string()
}

/// Writes the sweep as CSV with columns
/// `p1,p0,c_d,N,eta_bar,mu_bar,c1,c2,c3,c4,c5`. Infeasible points have
/// empty value columns and all flags 0.
pub fn write_sweep_csv<W: Write>(result: &SweepResult, out: &mut W) -> Result<()> {
    writeln!(out, "p1,p0,c_d,N,eta_bar,mu_bar,c1,c2,c3,c4,c5")?;
    for row in &result.rows {
        match &row.record {
            Some(r) => {
                let f = r.conditions.0.map(u8::from);
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    fmt_real(row.p1),
                    fmt_real(row.p0),
                    r.d_min,
                    r.n,
                    fmt_real(r.eta_bar),
                    fmt_real(r.mu_bar),
                    f[0],
                    f[1],
                    f[2],
                    f[3],
                    f[4]
                )?;
            }
            None => writeln!(out, "{},{},,,,,0,0,0,0,0", fmt_real(row.p1), fmt_real(row.p0))?,
        }
    }
    Ok(())
}

/// Writes `p1 c_d` pairs for plotting; infeasible points are `nan`.
pub fn write_plot_data<W: Write>(result: &SweepResult, out: &mut W) -> Result<()> {
    for row in &result.rows {
        match row.c_d() {
            Some(c) => writeln!(out, "{} {}", fmt_real(row.p1), c)?,
            None => writeln!(out, "{} nan", fmt_real(row.p1))?,
        }
    }
    Ok(())
}
