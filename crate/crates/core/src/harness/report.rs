//! Run reports and their JSON, CSV and plot-data renderings.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{SearchConfig, SweepConfig};
use crate::bounds::{BoundReport, Inequality, Tolerances, Verdict, ViolationClass};
use crate::error::{Error, Result};

pub const TOOL_NAME: &str = "ostrogruss";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConfigEcho {
    Sweep(SweepConfig),
    Search(SearchConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub case_index: usize,
    #[serde(rename = "fn")]
    pub fn_id: String,
    pub inequality: Inequality,
    pub class: ViolationClass,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessSummary {
    pub count: usize,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl TightnessSummary {
    fn from_ratios(mut ratios: Vec<f64>) -> Option<Self> {
        if ratios.is_empty() {
            return None;
        }
        ratios.sort_by(f64::total_cmp);
        let n = ratios.len();
        let median = if n % 2 == 1 {
            ratios[n / 2]
        } else {
            0.5 * (ratios[n / 2 - 1] + ratios[n / 2])
        };
        Some(TightnessSummary {
            count: n,
            min: ratios[0],
            median,
            max: ratios[n - 1],
        })
    }
}

/// A (function, interval) pair that could not be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedCase {
    #[serde(rename = "fn")]
    pub fn_id: String,
    pub a: f64,
    pub b: f64,
    pub reason: String,
}

/// A search trial where a targeted published bound failed while its
/// repaired counterpart held.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchFinding {
    pub case_index: usize,
    pub target: super::Target,
    /// Id of the failed claim, e.g. `eq21_stated` or `paper_sup_constant`.
    pub claim: String,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub trials: usize,
    pub evaluated: usize,
    pub rejected: usize,
    pub findings: Vec<SearchFinding>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub config: ConfigEcho,
    pub tolerances: Tolerances,
    pub cases: Vec<BoundReport>,
    pub skipped: Vec<SkippedCase>,
    pub violations: Vec<Violation>,
    pub fatal_count: usize,
    pub finding_count: usize,
    pub tightness: BTreeMap<Inequality, TightnessSummary>,
    pub search: Option<SearchSummary>,
    /// Wall-clock time of the run. Not serialized, so that reports for the
    /// same configuration are byte-identical.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl RunReport {
    pub fn empty(config: ConfigEcho, tolerances: Tolerances) -> Self {
        RunReport {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            config,
            tolerances,
            cases: Vec::new(),
            skipped: Vec::new(),
            violations: Vec::new(),
            fatal_count: 0,
            finding_count: 0,
            tightness: BTreeMap::new(),
            search: None,
            elapsed: Duration::ZERO,
        }
    }

    /// Installs `cases`, deriving the violation list from their flags, and
    /// summarizes tightness over `tightness_source`.
    pub(crate) fn fill(&mut self, cases: Vec<BoundReport>, tightness_source: &[BoundReport]) {
        self.violations = violations_of(&cases);
        self.fatal_count = self
            .violations
            .iter()
            .filter(|v| v.class == ViolationClass::Fatal)
            .count();
        self.finding_count = self.violations.len() - self.fatal_count;
        self.tightness = tightness_of(tightness_source);
        self.cases = cases;
    }

    pub fn fatal_violations(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| v.class == ViolationClass::Fatal)
    }
}

fn violations_of(cases: &[BoundReport]) -> Vec<Violation> {
    let mut out = Vec::new();
    for r in cases {
        for c in &r.checks {
            if c.verdict != Verdict::Violated {
                continue;
            }
            let (Some(lhs), Some(rhs)) = (c.lhs, c.rhs) else {
                continue;
            };
            out.push(Violation {
                case_index: r.case_index,
                fn_id: r.fn_id.clone(),
                inequality: c.inequality,
                class: c.class,
                lhs,
                rhs,
                gap: lhs - rhs,
            });
        }
    }
    out
}

fn tightness_of(cases: &[BoundReport]) -> BTreeMap<Inequality, TightnessSummary> {
    let mut ratios: BTreeMap<Inequality, Vec<f64>> = BTreeMap::new();
    for r in cases {
        for (ineq, ratio) in &r.tightness {
            ratios.entry(*ineq).or_default().push(*ratio);
        }
    }
    ratios
        .into_iter()
        .filter_map(|(k, v)| TightnessSummary::from_ratios(v).map(|s| (k, s)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Json,
    Csv,
    Plotdata,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "plotdata" => Ok(ReportFormat::Plotdata),
            other => Err(Error::Config(format!(
                "unknown report format `{other}` (expected json, csv or plotdata)"
            ))),
        }
    }
}

fn num(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Serialize(e.to_string())
}

/// Renders `report` in memory. The output depends only on the report's
/// serialized fields.
pub fn render_report(report: &RunReport, format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).map_err(csv_err)?;
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "case_id",
                "fn",
                "a",
                "b",
                "x",
                "inequality",
                "lhs",
                "rhs",
                "ratio",
                "verdict",
            ])
            .map_err(csv_err)?;
            for r in &report.cases {
                for c in &r.checks {
                    let verdict = match c.verdict {
                        Verdict::Holds => "holds",
                        Verdict::Violated => "violated",
                        Verdict::NotApplicable => "not_applicable",
                    };
                    w.write_record([
                        r.case_index.to_string(),
                        r.fn_id.clone(),
                        r.a.to_string(),
                        r.b.to_string(),
                        r.x.to_string(),
                        c.inequality.id().to_string(),
                        num(c.lhs),
                        num(c.rhs),
                        num(c.ratio),
                        verdict.to_string(),
                    ])
                    .map_err(csv_err)?;
                }
            }
            w.into_inner().map_err(csv_err)
        }
        ReportFormat::Plotdata => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "series",
                "x",
                "lhs_derived",
                "lhs_stated",
                "rhs_21",
                "rhs_22",
                "rhs_repaired_gamma",
                "rhs_212",
            ])
            .map_err(csv_err)?;
            for r in &report.cases {
                w.write_record([
                    format!("{}:{}:{}", r.fn_id, r.a, r.b),
                    r.x.to_string(),
                    num(r.lhs_derived),
                    num(r.lhs_stated),
                    num(r.rhs_21),
                    num(r.rhs_22),
                    num(r.rhs_repaired_gamma),
                    num(r.rhs_212),
                ])
                .map_err(csv_err)?;
            }
            w.into_inner().map_err(csv_err)
        }
    }
}

/// Writes `report` to `path`. The document is rendered completely before the
/// file is touched.
pub fn emit_report(report: &RunReport, format: ReportFormat, path: &Path) -> Result<()> {
    let bytes = render_report(report, format)?;
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
