//! Sweeps over the corpus, randomized counterexample search, and the
//! fatal-class verification suite.

mod report;
pub mod rng;
mod verify;

use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{evaluate_case, BoundReport, EvalCase, Inequality, Tolerances, Verdict};
use crate::error::{Error, Result};
use crate::funcmodel::{self, Interval, TestFunction};

pub use report::{
    emit_report, render_report, ConfigEcho, ReportFormat, RunReport, SearchFinding,
    SearchSummary, SkippedCase, TightnessSummary, Violation, TOOL_NAME, TOOL_VERSION,
};
pub use verify::{
    exact_envelope_fns, grid_sup_deviation, random_exact_cases, random_kernel_specs, verify,
    InvariantOutcome, VerifyConfig,
};

/// Intervals of the default sweep.
pub const DEFAULT_INTERVALS: [(f64, f64); 4] = [(0.0, 1.0), (1.0, 2.0), (-1.0, 1.0), (0.0, 2.0)];
/// Points per interval in the default sweep, endpoints included.
pub const DEFAULT_X_COUNT: usize = 21;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub fns: Vec<String>,
    pub intervals: Vec<Interval>,
    pub x_count: usize,
    pub tolerances: Tolerances,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            fns: funcmodel::corpus_ids().into_iter().map(String::from).collect(),
            intervals: DEFAULT_INTERVALS
                .iter()
                .map(|&(a, b)| Interval { a, b })
                .collect(),
            x_count: DEFAULT_X_COUNT,
            tolerances: Tolerances::default(),
            seed: 0,
        }
    }
}

fn resolve_fns(ids: &[String]) -> Result<Vec<&'static TestFunction>> {
    if ids.is_empty() {
        return Err(Error::Config("at least one function id is required".into()));
    }
    ids.iter().map(|id| funcmodel::lookup(id)).collect()
}

fn check_tolerances(t: &Tolerances) -> Result<()> {
    let positive = |v: f64| v > 0.0 && v.is_finite();
    if positive(t.oracle) && positive(t.identity) && positive(t.verdict_slack) && t.envelope_grid >= 2
    {
        Ok(())
    } else {
        Err(Error::Config(format!("invalid tolerances {t:?}")))
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<Vec<&'static TestFunction>> {
        let fns = resolve_fns(&self.fns)?;
        if self.x_count < 2 {
            return Err(Error::Config(format!("x_count must be >= 2, got {}", self.x_count)));
        }
        if self.intervals.is_empty() {
            return Err(Error::Config("at least one interval is required".into()));
        }
        for iv in &self.intervals {
            Interval::new(iv.a, iv.b)?;
        }
        check_tolerances(&self.tolerances)?;
        Ok(fns)
    }

    /// All cases in function → interval → x order (position = case index),
    /// plus the (function, interval) pairs outside the function's safe domain.
    pub fn cases(&self) -> Result<(Vec<EvalCase>, Vec<SkippedCase>)> {
        let fns = self.validate()?;
        let mut cases = Vec::new();
        let mut skipped = Vec::new();
        for func in fns {
            for &iv in &self.intervals {
                if let Err(e) = func.check_interval(iv) {
                    skipped.push(SkippedCase {
                        fn_id: func.id.to_string(),
                        a: iv.a,
                        b: iv.b,
                        reason: e.to_string(),
                    });
                    continue;
                }
                for x in iv.grid(self.x_count) {
                    cases.push(EvalCase::with_grid(func, iv, x, self.tolerances.envelope_grid)?);
                }
            }
        }
        Ok((cases, skipped))
    }
}

fn evaluate_all(cases: &[EvalCase], tols: &Tolerances) -> Vec<BoundReport> {
    cases
        .par_iter()
        .enumerate()
        .map(|(i, c)| evaluate_case(c, i, tols))
        .collect()
}

/// Evaluates every `(function, interval, x)` case of `cfg`.
///
/// Guaranteed relations that fail are reported as fatal violations, failures
/// of the published bounds as findings; neither is an error.
pub fn run_sweep(cfg: &SweepConfig) -> Result<RunReport> {
    let start = Instant::now();
    let (cases, skipped) = cfg.cases()?;
    let reports = evaluate_all(&cases, &cfg.tolerances);
    let mut run = RunReport::empty(ConfigEcho::Sweep(cfg.clone()), cfg.tolerances);
    run.skipped = skipped;
    run.fill(reports.clone(), &reports);
    run.elapsed = start.elapsed();
    Ok(run)
}

/// Published claims the search can target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Eq21,
    Eq22,
    Eq212,
    StatedForm,
    PaperSupConstant,
}

impl Target {
    pub const ALL: [Target; 5] = [
        Target::Eq21,
        Target::Eq22,
        Target::Eq212,
        Target::StatedForm,
        Target::PaperSupConstant,
    ];

    /// Pairs of (published claim, sound counterpart that must hold for the
    /// failure to count). The sup-constant claim is not a per-case inequality
    /// and is handled separately.
    fn pairs(&self) -> &'static [(Inequality, &'static [Inequality])] {
        use Inequality as I;
        match self {
            Target::Eq21 => &[(I::PaperLower, &[I::RepairedLower])],
            Target::Eq22 => &[(I::PaperUpper, &[I::RepairedUpper])],
            Target::Eq212 => &[(I::PaperMidpoint, &[I::RepairedMidpoint])],
            Target::StatedForm => &[
                (I::StatedLower, &[I::RepairedLower]),
                (I::StatedUpper, &[I::RepairedUpper]),
            ],
            Target::PaperSupConstant => &[],
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq21" => Ok(Target::Eq21),
            "eq22" => Ok(Target::Eq22),
            "eq212" => Ok(Target::Eq212),
            "stated_form" => Ok(Target::StatedForm),
            "paper_sup_constant" => Ok(Target::PaperSupConstant),
            other => Err(Error::Config(format!(
                "unknown search target `{other}` (expected eq21, eq22, eq212, stated_form, paper_sup_constant)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub n_trials: usize,
    pub a_range: (f64, f64),
    pub width_range: (f64, f64),
    pub targets: Vec<Target>,
    pub fns: Vec<String>,
    pub tolerances: Tolerances,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            n_trials: 1000,
            a_range: (-1.0, 2.0),
            width_range: (0.1, 2.0),
            targets: Target::ALL.to_vec(),
            fns: funcmodel::corpus_ids().into_iter().map(String::from).collect(),
            tolerances: Tolerances::default(),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<Vec<&'static TestFunction>> {
        let fns = resolve_fns(&self.fns)?;
        if self.n_trials < 1 {
            return Err(Error::Config("n_trials must be >= 1".into()));
        }
        let (alo, ahi) = self.a_range;
        if !(alo.is_finite() && ahi.is_finite() && alo <= ahi) {
            return Err(Error::Config(format!("invalid a_range {alo}:{ahi}")));
        }
        let (wlo, whi) = self.width_range;
        if !(wlo.is_finite() && whi.is_finite() && wlo > 0.0 && wlo <= whi) {
            return Err(Error::Config(format!(
                "invalid width_range {wlo}:{whi} (need 0 < lo <= hi)"
            )));
        }
        if self.targets.is_empty() {
            return Err(Error::Config("at least one search target is required".into()));
        }
        check_tolerances(&self.tolerances)?;
        Ok(fns)
    }

    /// The case drawn for trial `index`, or the reason it was rejected.
    pub fn draw(&self, fns: &[&'static TestFunction], index: usize) -> Result<EvalCase> {
        let mut rng = rng::trial_rng(self.seed, index as u64);
        let pick = rng::uniform(&mut rng, 0.0, fns.len() as f64) as usize;
        let func = fns[pick.min(fns.len() - 1)];
        let a = rng::uniform(&mut rng, self.a_range.0, self.a_range.1);
        let width = rng::uniform(&mut rng, self.width_range.0, self.width_range.1);
        let iv = Interval::new(a, a + width)?;
        let x = rng::uniform(&mut rng, iv.a, iv.b);
        EvalCase::with_grid(func, iv, x, self.tolerances.envelope_grid)
    }
}

fn findings_for(report: &BoundReport, targets: &[Target], tols: &Tolerances) -> Vec<SearchFinding> {
    let holds = |i: Inequality| report.verdict(i) == Verdict::Holds;
    let finding = |target, claim: &str, lhs: f64, rhs: f64| SearchFinding {
        case_index: report.case_index,
        target,
        claim: claim.to_string(),
        lhs,
        rhs,
        gap: lhs - rhs,
    };
    let mut out = Vec::new();
    for &target in targets {
        if target == Target::PaperSupConstant {
            let (sup, constant) = (report.kernel.sup_dev, report.paper_sup_constant);
            if sup > constant + tols.slack(constant)
                && holds(Inequality::RepairedLower)
                && holds(Inequality::RepairedUpper)
            {
                out.push(finding(target, "paper_sup_constant", sup, constant));
            }
            continue;
        }
        for (claim, sound) in target.pairs() {
            let Some(check) = report.check(*claim) else {
                continue;
            };
            if check.verdict != Verdict::Violated || !sound.iter().all(|s| holds(*s)) {
                continue;
            }
            if let (Some(lhs), Some(rhs)) = (check.lhs, check.rhs) {
                out.push(finding(target, claim.id(), lhs, rhs));
            }
        }
    }
    out
}

/// Random search for cases where a targeted published bound fails while the
/// corresponding sound bound holds.
///
/// Trial `i` is drawn from its own counter-based stream, so the report is a
/// pure function of the configuration. The report keeps the cases with a
/// finding or a fatal violation; tightness is summarized over every
/// evaluated trial.
pub fn search_counterexamples(cfg: &SearchConfig) -> Result<RunReport> {
    let start = Instant::now();
    let fns = cfg.validate()?;
    let tols = cfg.tolerances;

    let evaluated: Vec<Option<BoundReport>> = (0..cfg.n_trials)
        .into_par_iter()
        .map(|i| cfg.draw(&fns, i).ok().map(|c| evaluate_case(&c, i, &tols)))
        .collect();
    let rejected = evaluated.iter().filter(|r| r.is_none()).count();
    let evaluated: Vec<BoundReport> = evaluated.into_iter().flatten().collect();

    let mut findings = Vec::new();
    let mut kept = Vec::new();
    for r in &evaluated {
        let f = findings_for(r, &cfg.targets, &tols);
        if !f.is_empty() || r.fatal_violations().next().is_some() {
            kept.push(r.clone());
        }
        findings.extend(f);
    }

    let mut run = RunReport::empty(ConfigEcho::Search(cfg.clone()), tols);
    run.fill(kept, &evaluated);
    run.search = Some(SearchSummary {
        trials: cfg.n_trials,
        evaluated: evaluated.len(),
        rejected,
        findings,
    });
    run.elapsed = start.elapsed();
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::ViolationClass;

    fn sweep(fns: &[&str], intervals: &[(f64, f64)]) -> RunReport {
        let cfg = SweepConfig {
            fns: fns.iter().map(|s| s.to_string()).collect(),
            intervals: intervals.iter().map(|&(a, b)| Interval { a, b }).collect(),
            ..SweepConfig::default()
        };
        run_sweep(&cfg).unwrap()
    }

    #[test]
    fn linear_sweep_is_clean() {
        let r = sweep(&["linear"], &DEFAULT_INTERVALS);
        assert_eq!(r.cases.len(), 4 * 21);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        for c in &r.cases {
            assert!(c.lhs_derived.unwrap() < 1e-12);
        }
    }

    #[test]
    fn cube_on_unit_interval_has_no_envelope_findings() {
        let r = sweep(&["cube"], &[(0.0, 1.0)]);
        assert_eq!(r.cases.len(), 21);
        assert!(!r
            .violations
            .iter()
            .any(|v| matches!(v.inequality, Inequality::PaperLower | Inequality::PaperUpper)));
    }

    #[test]
    fn cube_off_origin_yields_finding_but_no_fatal() {
        let r = sweep(&["cube"], &[(1.0, 2.0)]);
        assert_eq!(r.fatal_count, 0);
        let at_mid = r.cases.iter().find(|c| c.x == 1.5).unwrap();
        assert!(r
            .violations
            .iter()
            .any(|v| v.case_index == at_mid.case_index && v.inequality == Inequality::PaperLower));
    }

    #[test]
    fn unknown_id_is_a_config_error() {
        let cfg = SweepConfig {
            fns: vec!["cube".into(), "tanh".into()],
            ..SweepConfig::default()
        };
        let err = run_sweep(&cfg).unwrap_err();
        assert!(err.is_config());
        assert!(err.to_string().contains("linear"));
    }

    #[test]
    fn incompatible_intervals_are_skipped() {
        let r = sweep(&["logshift"], &[(-1.0, 1.0), (0.0, 1.0)]);
        assert_eq!(r.skipped.len(), 1);
        assert_eq!(r.cases.len(), 21);
    }

    #[test]
    fn violations_are_recomputable() {
        let r = sweep(&["cube", "quartic"], &DEFAULT_INTERVALS);
        for v in &r.violations {
            let eps = r.tolerances.slack(v.rhs);
            assert!(v.lhs > v.rhs + eps);
            let case = &r.cases[v.case_index];
            assert_eq!(case.verdict(v.inequality), Verdict::Violated);
        }
        let flagged: usize = r
            .cases
            .iter()
            .map(|c| c.checks.iter().filter(|k| k.verdict == Verdict::Violated).count())
            .sum();
        assert_eq!(flagged, r.violations.len());
    }

    #[test]
    fn search_rejects_bad_configs() {
        let base = SearchConfig::default();
        let zero = SearchConfig {
            n_trials: 0,
            ..base.clone()
        };
        assert!(search_counterexamples(&zero).unwrap_err().is_config());
        let flat = SearchConfig {
            width_range: (0.0, 1.0),
            ..base.clone()
        };
        assert!(search_counterexamples(&flat).is_err());
        let none = SearchConfig {
            targets: vec![],
            ..base
        };
        assert!(search_counterexamples(&none).is_err());
    }

    #[test]
    fn search_finds_sup_constant_failures_off_origin() {
        let cfg = SearchConfig {
            seed: 5,
            n_trials: 300,
            a_range: (0.5, 2.0),
            width_range: (0.5, 2.0),
            targets: vec![Target::PaperSupConstant],
            ..SearchConfig::default()
        };
        let r = search_counterexamples(&cfg).unwrap();
        let s = r.search.as_ref().unwrap();
        assert!(!s.findings.is_empty());
        assert_eq!(r.fatal_count, 0);
        for f in &s.findings {
            assert_eq!(f.claim, "paper_sup_constant");
            assert!(f.lhs > f.rhs);
        }
        assert!(r
            .violations
            .iter()
            .all(|v| v.class == ViolationClass::Finding || v.class == ViolationClass::Fatal));
    }

    #[test]
    fn search_is_reproducible() {
        let cfg = SearchConfig {
            seed: 11,
            n_trials: 64,
            ..SearchConfig::default()
        };
        let a = render_report(&search_counterexamples(&cfg).unwrap(), ReportFormat::Json).unwrap();
        let b = render_report(&search_counterexamples(&cfg).unwrap(), ReportFormat::Json).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn draw_rejects_out_of_domain_intervals() {
        let cfg = SearchConfig {
            a_range: (-3.0, -2.0),
            fns: vec!["logshift".into()],
            ..SearchConfig::default()
        };
        let fns = cfg.validate().unwrap();
        assert!(cfg.draw(&fns, 0).is_err());
    }

    #[test]
    fn target_ids_round_trip() {
        for t in Target::ALL {
            let id = serde_json::to_value(t).unwrap();
            assert_eq!(id.as_str().unwrap().parse::<Target>().unwrap(), t);
        }
        assert!("eq99".parse::<Target>().is_err());
    }
}
