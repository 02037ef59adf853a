//! Solves every case and checks each certified lower bound against a
//! threshold.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{build_catalog, CaseSpec};
use crate::error::{Error, Result};
use crate::geometry::{area, CoverParams};
use crate::solver::{minimize_chain_length, SolveOptions, SolveResult, SolveStatus};

pub const SCHEMA: &str = "v1";
pub const DEFAULT_THRESHOLD: f64 = 1.00001;
pub const PUBLISHED_TOLERANCE: f64 = 5e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseStatus {
    Certified,
    /// Empty feasible set; the case holds vacuously.
    Infeasible,
    /// No valid certificate; the lower bound is `-inf`.
    Failed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub name: String,
    pub predicates: Vec<String>,
    #[serde(with = "crate::num_serde")]
    pub min_length: f64,
    #[serde(with = "crate::num_serde")]
    pub lower_bound: f64,
    #[serde(with = "crate::num_serde")]
    pub gap: f64,
    #[serde(with = "crate::num_serde")]
    pub kkt_residual: f64,
    pub published_bound: Option<f64>,
    pub status: CaseStatus,
    pub solver_status: SolveStatus,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub schema: String,
    pub params: CoverParams,
    pub area: f64,
    pub threshold: f64,
    pub gap_tol: f64,
    pub seed: u64,
    pub verdict: Verdict,
    pub cases: Vec<CaseReport>,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PublishedDelta {
    pub name: String,
    pub computed: f64,
    pub published: f64,
    pub delta: f64,
    pub flagged: bool,
}

pub fn case_report(spec: &CaseSpec, res: &SolveResult, seconds: f64) -> CaseReport {
    let (status, lower_bound) = match res.status {
        SolveStatus::Certified => (CaseStatus::Certified, res.lower_bound),
        SolveStatus::Infeasible => (CaseStatus::Infeasible, f64::INFINITY),
        _ => (CaseStatus::Failed, f64::NEG_INFINITY),
    };
    CaseReport {
        name: spec.name.clone(),
        predicates: spec.predicates.clone(),
        min_length: res.primal_value,
        lower_bound,
        gap: res.gap,
        kkt_residual: res.kkt_residual,
        published_bound: spec.published_bound,
        status,
        solver_status: res.status,
        seconds,
    }
}

pub fn solve_case(spec: &CaseSpec, opts: &SolveOptions) -> Result<CaseReport> {
    let start = Instant::now();
    let res = minimize_chain_length(&spec.constraints, opts)?;
    Ok(case_report(spec, &res, start.elapsed().as_secs_f64()))
}

/// Whether every lower bound reaches the threshold.
pub fn verdict(cases: &[CaseReport], threshold: f64) -> Verdict {
    if cases.iter().all(|c| c.lower_bound >= threshold) {
        Verdict::Certified
    } else {
        Verdict::Failed
    }
}

/// Solves `cases` concurrently; the report keeps their order.
pub fn certify_cases(
    params: &CoverParams,
    cases: &[CaseSpec],
    threshold: f64,
    opts: &SolveOptions,
) -> Result<CertificationReport> {
    if !(threshold > 1.0 && threshold.is_finite()) {
        return Err(Error::InvalidOptions(format!("threshold must exceed 1, got {threshold}")));
    }
    opts.validate()?;
    let start = Instant::now();
    let reports = cases
        .par_iter()
        .map(|c| solve_case(c, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(CertificationReport {
        schema: SCHEMA.to_string(),
        params: *params,
        area: area(params),
        threshold,
        gap_tol: opts.gap_tol,
        seed: opts.seed,
        verdict: verdict(&reports, threshold),
        cases: reports,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// All catalog cases for `params`.
pub fn certify(params: &CoverParams, threshold: f64, opts: &SolveOptions) -> Result<CertificationReport> {
    certify_cases(params, &build_catalog(params), threshold, opts)
}

impl CertificationReport {
    /// The case with the smallest lower bound.
    pub fn binding_case(&self) -> Option<&CaseReport> {
        self.cases.iter().min_by(|a, b| a.lower_bound.total_cmp(&b.lower_bound))
    }

    pub fn compare_to_published(&self) -> Vec<PublishedDelta> {
        compare_to_published(self)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let r: CertificationReport = serde_json::from_str(text)?;
        if r.schema != SCHEMA {
            return Err(Error::Malformed(format!("unsupported report schema `{}`", r.schema)));
        }
        Ok(r)
    }

    /// One line per case, values at 7 decimals.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            let published = c.published_bound.map_or("-".to_string(), |b| format!("{b:.5}"));
            out.push_str(&format!(
                "{:<10} {:<12} min {} lb {} gap {:.1e} published {}\n",
                c.name,
                status_label(c.status),
                fmt7(c.min_length),
                fmt7(c.lower_bound),
                c.gap,
                published
            ));
        }
        out.push_str(&format!(
            "area {:.7} threshold {:.7} verdict {}\n",
            self.area,
            self.threshold,
            match self.verdict {
                Verdict::Certified => "certified",
                Verdict::Failed => "failed",
            }
        ));
        out
    }
}

fn status_label(s: CaseStatus) -> &'static str {
    match s {
        CaseStatus::Certified => "certified",
        CaseStatus::Infeasible => "infeasible",
        CaseStatus::Failed => "failed",
    }
}

pub fn fmt7(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.7}")
    } else if v > 0.0 {
        "inf".to_string()
    } else if v < 0.0 {
        "-inf".to_string()
    } else {
        "nan".to_string()
    }
}

/// `|min_length - published_bound|` per case with a published value; deltas
/// above 5e-3 are flagged.
pub fn compare_to_published(report: &CertificationReport) -> Vec<PublishedDelta> {
    report
        .cases
        .iter()
        .filter_map(|c| {
            c.published_bound.map(|published| {
                let delta = (c.min_length - published).abs();
                PublishedDelta { name: c.name.clone(), computed: c.min_length, published, delta, flagged: !(delta <= PUBLISHED_TOLERANCE) }
            })
        })
        .collect()
}
