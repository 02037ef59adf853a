//! Coarse-to-fine grid search over the clip legs for the least-area cover
//! whose case minima all stay above a threshold.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{build_catalog, CaseSpec};
use crate::certify::{certify, solve_case, CaseStatus, CertificationReport};
use crate::error::{Error, Result};
use crate::geometry::{area, rect_height, rect_width, Corner, CoverParams};
use crate::solver::SolveOptions;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    pub fn fixed(v: f64) -> Self {
        Range { min: v, max: v }
    }

    fn points(&self, n: usize) -> Vec<f64> {
        if self.min == self.max || n < 2 {
            return vec![0.5 * (self.min + self.max)];
        }
        (0..n).map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64).collect()
    }

    fn around(&self, center: f64, half: f64) -> Range {
        if self.min == self.max {
            return *self;
        }
        Range { min: (center - half).max(self.min), max: (center + half).min(self.max) }
    }

    fn width(&self) -> f64 {
        self.max - self.min
    }
}

fn default_points() -> usize {
    9
}
fn default_levels() -> usize {
    3
}
fn default_factor() -> f64 {
    4.0
}
fn default_gap_tol() -> f64 {
    1e-6
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub threshold: f64,
    pub s: Range,
    pub t: Range,
    pub s2: Range,
    /// Grid points per free axis at every level.
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_levels")]
    pub levels: usize,
    /// Each level shrinks the ranges by this factor around the incumbent.
    #[serde(default = "default_factor")]
    pub refine_factor: f64,
    #[serde(default = "default_gap_tol")]
    pub gap_tol: f64,
    #[serde(default)]
    pub seed: u64,
}

impl SearchConfig {
    /// Ranges of relative half-width `rel` around the canonical legs.
    pub fn around_canonical(threshold: f64, rel: f64) -> Self {
        let c = CoverParams::canonical();
        let r = |v: f64| Range { min: v * (1.0 - rel), max: v * (1.0 + rel) };
        SearchConfig {
            threshold,
            s: r(c.s),
            t: r(c.t),
            s2: r(c.s2),
            points: default_points(),
            levels: default_levels(),
            refine_factor: default_factor(),
            gap_tol: default_gap_tol(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.threshold > 1.0 && self.threshold.is_finite()) {
            return bad(format!("threshold must exceed 1, got {}", self.threshold));
        }
        for (name, r, hi) in [("s", self.s, rect_width()), ("t", self.t, rect_height()), ("s2", self.s2, rect_width())] {
            if !(r.min.is_finite() && r.max.is_finite() && 0.0 <= r.min && r.min <= r.max && r.max < hi) {
                return bad(format!("range for {name} must satisfy 0 <= min <= max < {hi:.7}"));
            }
        }
        if self.points < 2 || self.points > 64 {
            return bad("points per axis must lie in 2..=64".into());
        }
        if self.levels == 0 || self.levels > 10 {
            return bad("levels must lie in 1..=10".into());
        }
        if !(self.refine_factor > 1.0 && self.refine_factor.is_finite()) {
            return bad("refine_factor must exceed 1".into());
        }
        if !(self.gap_tol > 0.0 && self.gap_tol.is_finite()) {
            return bad("gap_tol must be positive".into());
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let c: SearchConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    fn options(&self) -> SolveOptions {
        SolveOptions { gap_tol: self.gap_tol, seed: self.seed, ..SolveOptions::default() }
    }
}

/// One evaluated triple. For infeasible triples the scan stops at the
/// first case below the threshold, which is the one recorded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub level: usize,
    pub s: f64,
    pub t: f64,
    pub s2: f64,
    pub area: f64,
    pub feasible: bool,
    pub min_case: String,
    pub min_value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub best: CoverParams,
    /// False when no evaluated triple met the threshold; `best` is then the
    /// canonical triple.
    pub found: bool,
    pub report: CertificationReport,
    pub trace: Vec<TraceRow>,
}

/// Cases most likely to bind are tried first so that infeasible triples
/// are rejected after one or two solves.
fn priority(name: &str) -> usize {
    match name {
        "3C.3uC" | "3C.3dC" => 0,
        "1.1" | "2.2d" | "2C.3uC" => 1,
        _ => 2,
    }
}

fn evaluate(p: &CoverParams, level: usize, threshold: f64, opts: &SolveOptions) -> Result<TraceRow> {
    let mut cases: Vec<CaseSpec> = build_catalog(p);
    cases.sort_by_key(|c| priority(&c.name));
    let mut min_case = String::new();
    let mut min_value = f64::INFINITY;
    let mut feasible = true;
    for c in &cases {
        let r = solve_case(c, opts)?;
        let lb = r.lower_bound;
        if lb < min_value || min_case.is_empty() {
            min_value = lb;
            min_case = c.name.clone();
        }
        if !(lb >= threshold) || r.status == CaseStatus::Failed {
            feasible = false;
            min_value = lb;
            min_case = c.name.clone();
            break;
        }
    }
    Ok(TraceRow { level, s: p.s, t: p.t, s2: p.s2, area: area(p), feasible, min_case, min_value })
}

fn candidates(cfg: &SearchConfig, s: Range, t: Range, s2: Range) -> Vec<CoverParams> {
    let mut out = Vec::new();
    for &a in &s.points(cfg.points) {
        for &b in &t.points(cfg.points) {
            for &c in &s2.points(cfg.points) {
                if (a == 0.0) != (b == 0.0) {
                    continue;
                }
                if let Ok(p) = CoverParams::degenerate(a, b, c) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Grid search, `cfg.levels` levels deep. Within a level candidates are
/// scanned in order of increasing area, in parallel chunks, and the scan
/// stops at the first chunk holding a feasible triple.
pub fn search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let opts = cfg.options();
    let (mut s, mut t, mut s2) = (cfg.s, cfg.t, cfg.s2);
    let mut best: Option<CoverParams> = None;
    let mut trace = Vec::new();
    let chunk = rayon::current_num_threads().max(1) * 2;
    for level in 0..cfg.levels {
        let mut cands = candidates(cfg, s, t, s2);
        cands.sort_by(|a, b| area(a).total_cmp(&area(b)));
        if let Some(b) = best {
            cands.retain(|p| area(p) < area(&b));
        }
        for group in cands.chunks(chunk) {
            let rows = group
                .par_iter()
                .map(|p| evaluate(p, level, cfg.threshold, &opts))
                .collect::<Result<Vec<_>>>()?;
            let hit = group
                .iter()
                .zip(&rows)
                .filter(|(_, r)| r.feasible)
                .min_by(|a, b| area(a.0).total_cmp(&area(b.0)))
                .map(|(p, _)| *p);
            trace.extend(rows);
            if let Some(p) = hit {
                best = Some(p);
                break;
            }
        }
        let Some(b) = best else { break };
        let shrink = |r: Range, orig: Range, c: f64| {
            let spacing = r.width() / (cfg.points - 1) as f64;
            orig.around(c, (r.width() / cfg.refine_factor).max(2.0 * spacing) / 2.0)
        };
        s = shrink(s, cfg.s, b.s);
        t = shrink(t, cfg.t, b.t);
        s2 = shrink(s2, cfg.s2, b.s2);
    }
    let found = best.is_some();
    let best = best.unwrap_or_else(CoverParams::canonical);
    let report = certify(&best, cfg.threshold, &opts)?;
    Ok(SearchOutcome { best, found, report, trace })
}

pub fn write_trace<W: Write>(rows: &[TraceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Whether every positive clip at either unclipped corner cuts off an end
/// of the diagonal of length 1/2, while that diagonal itself fits.
pub fn third_corner_check(params: &CoverParams) -> bool {
    let hex = params.hexagon();
    let corners = [Corner::LowerRight, Corner::UpperLeft];
    crate::geometry::half_segment_inside(&hex)
        && corners.iter().all(|&c| {
            [1e-9, 1e-6, 1e-4, 1e-2]
                .iter()
                .all(|&d| !crate::geometry::half_segment_inside(&hex.with_corner_clip(c, d)))
        })
}
