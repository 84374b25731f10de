//! The fatal-class suite: relations that hold for every admissible input, so
//! any failure points at a defect in this crate rather than in a published
//! claim.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::{trial_rng, uniform};
use super::{evaluate_all, SweepConfig};
use crate::bounds::{
    integral_abs_dev, remainder_with_constant, BoundReport, EvalCase, Tolerances,
};
use crate::error::Result;
use crate::funcmodel::{self, Interval, TestFunction};
use crate::kernel::KernelSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub random_cases: usize,
    pub kernel_specs: usize,
    pub sup_grid: usize,
    pub sweep: SweepConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0x5eed,
            random_cases: 10_000,
            kernel_specs: 100,
            sup_grid: 100_000,
            sweep: SweepConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantOutcome {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    /// First failure, if any.
    pub example: Option<String>,
}

impl InvariantOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checked > 0
    }
}

struct Tally {
    name: &'static str,
    checked: usize,
    failures: usize,
    example: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checked: 0,
            failures: 0,
            example: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.example.is_none() {
                self.example = Some(describe());
            }
        }
    }

    fn finish(self) -> InvariantOutcome {
        InvariantOutcome {
            name: self.name.to_string(),
            checked: self.checked,
            failures: self.failures,
            example: self.example,
        }
    }
}

fn label(r: &BoundReport) -> String {
    format!("{} on [{}, {}] at x = {}", r.fn_id, r.a, r.b, r.x)
}

/// Functions whose `f''` envelope is exact.
pub fn exact_envelope_fns() -> Vec<&'static TestFunction> {
    funcmodel::corpus()
        .iter()
        .filter(|f| f.has_exact_envelope())
        .collect()
}

/// `count` random cases over functions with exact envelopes, with
/// `a ∈ [0, 2]`, width in `[0.1, 2]` and `x` uniform in `[a, b]`.
pub fn random_exact_cases(seed: u64, count: usize, tols: &Tolerances) -> Vec<EvalCase> {
    let fns = exact_envelope_fns();
    (0..count)
        .map(|i| {
            let mut rng = trial_rng(seed, i as u64);
            let pick = (uniform(&mut rng, 0.0, fns.len() as f64) as usize).min(fns.len() - 1);
            let a = uniform(&mut rng, 0.0, 2.0);
            let w = uniform(&mut rng, 0.1, 2.0);
            let iv = Interval { a, b: a + w };
            let x = uniform(&mut rng, iv.a, iv.b);
            EvalCase::with_grid(fns[pick], iv, x, tols.envelope_grid)
                .expect("exact-envelope corpus is defined on [0, 4]")
        })
        .collect()
}

/// `count` random kernel specs with `a ∈ [−2, 2]`, width in `[0.1, 3]`.
pub fn random_kernel_specs(seed: u64, count: usize) -> Vec<KernelSpec> {
    (0..count)
        .map(|i| {
            let mut rng = trial_rng(seed ^ 0x6b65_726e_656c, i as u64);
            let a = uniform(&mut rng, -2.0, 2.0);
            let b = a + uniform(&mut rng, 0.1, 3.0);
            let x = uniform(&mut rng, a, b);
            KernelSpec { a, b, x }
        })
        .collect()
}

/// Largest `|K − mean|` over `n + 1` uniform samples of `[a, b]`.
pub fn grid_sup_deviation(spec: &KernelSpec, n: usize) -> f64 {
    let mean = spec.mean();
    let iv = spec.interval();
    iv.grid(n + 1)
        .into_iter()
        .map(|t| (spec.eval(t).expect("grid stays in [a, b]") - mean).abs())
        .fold(0.0, f64::max)
}

fn fatal_tally(name: &'static str, reports: &[BoundReport]) -> InvariantOutcome {
    let mut tally = Tally::new(name);
    for r in reports {
        let bad: Vec<String> = r
            .fatal_violations()
            .map(|c| c.inequality.id().to_string())
            .chain(r.errors.iter().cloned())
            .collect();
        tally.record(bad.is_empty(), || format!("{}: {}", label(r), bad.join(", ")));
    }
    tally.finish()
}

/// Runs every fatal-class invariant; the suite passes iff every outcome
/// passes.
pub fn verify(cfg: &VerifyConfig) -> Result<Vec<InvariantOutcome>> {
    let tols = cfg.sweep.tolerances;
    let (cases, _) = cfg.sweep.cases()?;
    let sweep = evaluate_all(&cases, &tols);
    let mut out = vec![fatal_tally("sweep: guaranteed relations", &sweep)];

    let mut stated = Tally::new("sweep: stated form + remainder = -2 * mean * slope");
    let mut strict_identity = Tally::new("sweep: integration-by-parts identity <= 1e-8 * scale");
    for r in &sweep {
        if let (Some(s), Some(rem), Some(slope)) = (r.lhs_stated, r.remainder, r.slope_second) {
            let want = -2.0 * r.kernel.mean * slope;
            stated.record((s + rem - want).abs() <= 1e-8, || label(r));
        }
        if let Some(c) = r.check(crate::bounds::Inequality::Identity) {
            if let (Some(l), Some(rhs)) = (c.lhs, c.rhs) {
                strict_identity.record(l <= rhs, || format!("{}: {l:e}", label(r)));
            }
        }
    }
    out.push(strict_identity.finish());
    out.push(stated.finish());

    let exact: Vec<&EvalCase> = cases.iter().filter(|c| c.envelope.exact).collect();
    let constant_checks: Vec<(String, bool)> = exact
        .par_iter()
        .map(|c| {
            let ok = (|| -> Result<bool> {
                let base = remainder_with_constant(c, 0.0, tols.oracle)?;
                let mut ok = true;
                for k in [c.envelope.lower, c.envelope.upper, 17.3] {
                    ok &= (remainder_with_constant(c, k, tols.oracle)? - base).abs() <= 1e-9;
                }
                let s = c.slope_second()?;
                let w = c.iv.width();
                let lower = integral_abs_dev(c, c.envelope.lower, tols.oracle)?;
                let upper = integral_abs_dev(c, c.envelope.upper, tols.oracle)?;
                ok &= (lower - (s - c.envelope.lower) * w).abs() <= 1e-8;
                ok &= (upper - (c.envelope.upper - s) * w).abs() <= 1e-8;
                Ok(ok)
            })()
            .unwrap_or(false);
            (format!("{} on [{}, {}] at x = {}", c.func.id, c.iv.a, c.iv.b, c.x), ok)
        })
        .collect();
    let mut constant = Tally::new("sweep: remainder independent of C; envelope integrals exact");
    for (name, ok) in constant_checks {
        constant.record(ok, || name);
    }
    out.push(constant.finish());

    let random = random_exact_cases(cfg.seed, cfg.random_cases, &tols);
    let random_reports = evaluate_all(&random, &tols);
    out.push(fatal_tally("random exact-envelope cases: guaranteed relations", &random_reports));

    let specs = random_kernel_specs(cfg.seed, cfg.kernel_specs);
    let mut mean = Tally::new("kernel: closed-form mean vs oracle <= 1e-10");
    let mut centering = Tally::new("kernel: centered mean residual <= 1e-10");
    let mut sup = Tally::new("kernel: candidate sup vs dense grid");
    for s in &specs {
        let describe = || format!("a = {}, b = {}, x = {}", s.a, s.b, s.x);
        let oracle = s.weighted_integral(|_| 1.0, tols.oracle);
        mean.record(
            oracle.map(|m| (m - s.mean()).abs() <= 1e-10).unwrap_or(false),
            describe,
        );
        let res = s.centered_mean_residual(tols.oracle);
        centering.record(res.map(|r| r.abs() <= 1e-10).unwrap_or(false), describe);
        let exact = s.sup_deviation().sup_dev;
        let grid = grid_sup_deviation(s, cfg.sup_grid);
        let w = s.b - s.a;
        let slack = w * w / cfg.sup_grid as f64;
        sup.record(exact >= grid && exact - grid <= slack, describe);
    }
    out.push(mean.finish());
    out.push(centering.finish());
    out.push(sup.finish());
    Ok(out)
}
