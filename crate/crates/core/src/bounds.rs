//! Executable forms of the identities and inequalities built on the kernel.
//!
//! The central quantity is the remainder
//!
//! ```text
//! R(x) = (1/(b−a))∫ K(x,t) f''(t) dt − S · m(x)
//! ```
//!
//! with `S = (f'(b) − f'(a))/(b − a)` and `m(x)` the kernel mean. Because the
//! centered kernel integrates to zero, `R(x)` may be written with `f'' − C` for
//! any constant `C`, which yields bounds of the form `sup|K − m| · ∫|f'' − C| /
//! (b − a)`. The originally published bounds replace `sup|K − m|` by
//! `(b − a)²/3`; both variants are computed here, together with the classical
//! first-derivative baselines, so that a single [`BoundReport`] shows which
//! claims hold for a given `(f, a, b, x)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcmodel::{
    self, envelope, first_derivative_range, integrate_with_breaks, l2_norm_second, sign_changes,
    slope_first, slope_second, DerivativeEnvelope, Interval, TestFunction,
    DEFAULT_ENVELOPE_GRID,
};
use crate::kernel::{paper_sup_constant, KernelSpec, KernelSummary};

/// Relative slack used when checking that a difference quotient lies inside
/// its envelope; absorbs rounding in `(f'(b) − f'(a))/(b − a)`.
const ENVELOPE_SLACK: f64 = 1e-9;

/// The layered tolerances: oracle, identity checks, verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub oracle: f64,
    pub identity: f64,
    pub verdict_slack: f64,
    pub envelope_grid: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            oracle: funcmodel::quadrature::DEFAULT_TOL,
            identity: 1e-8,
            verdict_slack: 1e-7,
            envelope_grid: DEFAULT_ENVELOPE_GRID,
        }
    }
}

impl Tolerances {
    /// Slack `ε = verdict_slack · max(1, |rhs|)`.
    pub fn slack(&self, rhs: f64) -> f64 {
        self.verdict_slack * rhs.abs().max(1.0)
    }
}

/// One inequality instance: a function, an interval, a point and an envelope
/// of `f''` on the interval.
#[derive(Debug, Clone, Copy)]
pub struct EvalCase {
    pub func: &'static TestFunction,
    pub iv: Interval,
    pub x: f64,
    pub envelope: DerivativeEnvelope,
}

impl EvalCase {
    pub fn new(func: &'static TestFunction, iv: Interval, x: f64) -> Result<Self> {
        Self::with_grid(func, iv, x, DEFAULT_ENVELOPE_GRID)
    }

    pub fn with_grid(
        func: &'static TestFunction,
        iv: Interval,
        x: f64,
        n_grid: usize,
    ) -> Result<Self> {
        func.check_interval(iv)?;
        if !iv.contains(x) {
            return Err(Error::PointOutsideInterval { x, a: iv.a, b: iv.b });
        }
        let envelope = envelope(func, iv, n_grid)?;
        Ok(EvalCase {
            func,
            iv,
            x,
            envelope,
        })
    }

    /// Looks the function up by id and builds the case with the default grid.
    pub fn from_id(id: &str, a: f64, b: f64, x: f64) -> Result<Self> {
        Self::new(funcmodel::lookup(id)?, Interval::new(a, b)?, x)
    }

    pub fn kernel(&self) -> KernelSpec {
        KernelSpec {
            a: self.iv.a,
            b: self.iv.b,
            x: self.x,
        }
    }

    pub fn slope_second(&self) -> Result<f64> {
        slope_second(self.func, self.iv)
    }

    fn d2(&self) -> fn(f64) -> f64 {
        self.func.raw(2)
    }
}

/// Both sides of the integration-by-parts identity and their difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    /// `(1/(b−a))∫ K f''`
    pub kernel_side: f64,
    /// `x f'(x) − f(x) + (a²f'(a) − b²f'(b))/(2(b−a)) + (1/(b−a))∫ f`
    pub closed_side: f64,
    pub residual: f64,
    /// `max(1, |kernel_side|, |closed_side|)`
    pub scale: f64,
}

/// Evaluates the integration-by-parts identity, both sides through the
/// oracle.
pub fn identity_residual(case: &EvalCase, tol: f64) -> Result<IdentityCheck> {
    let kernel_side = case.kernel().weighted_integral(case.d2(), tol)?;
    let closed_side = closed_form_side(case, tol)?;
    Ok(IdentityCheck {
        kernel_side,
        closed_side,
        residual: kernel_side - closed_side,
        scale: 1.0_f64.max(kernel_side.abs()).max(closed_side.abs()),
    })
}

fn closed_form_side(case: &EvalCase, tol: f64) -> Result<f64> {
    let (f, iv, x) = (case.func, case.iv, case.x);
    let (a, b, w) = (iv.a, iv.b, iv.width());
    let mean_f = funcmodel::integral(f, iv, tol)? / w;
    Ok(x * f.first(x)? - f.value(x)?
        + (a * a * f.first(a)? - b * b * f.first(b)?) / (2.0 * w)
        + mean_f)
}

/// Signed remainder `(1/(b−a))∫ K f'' − S · m(x)`.
pub fn remainder(case: &EvalCase, tol: f64) -> Result<f64> {
    let k = case.kernel();
    let weighted = k.weighted_integral(case.d2(), tol)?;
    Ok(weighted - case.slope_second()? * k.mean())
}

/// The remainder written as `(1/(b−a))∫ (f'' − c)(K − m) dt`. Equal to
/// [`remainder`] for every `c`.
pub fn remainder_with_constant(case: &EvalCase, c: f64, tol: f64) -> Result<f64> {
    case.kernel().centered_weighted_integral(case.d2(), c, tol)
}

/// The signed expression inside the absolute value of the published
/// two-derivative inequality, evaluated term by term:
///
/// `f(x) − x f'(x) − (a²f'(a) − b²f'(b))/(2(b−a)) − m(x)·S − (1/(b−a))∫f`.
///
/// It differs from the remainder in the sign of the `m(x)·S` term, so
/// `lhs_stated + remainder = −2·m(x)·S`.
pub fn lhs_stated(case: &EvalCase, tol: f64) -> Result<f64> {
    let (f, iv, x) = (case.func, case.iv, case.x);
    let (a, b, w) = (iv.a, iv.b, iv.width());
    let mean_f = funcmodel::integral(f, iv, tol)? / w;
    Ok(f.value(x)?
        - x * f.first(x)?
        - (a * a * f.first(a)? - b * b * f.first(b)?) / (2.0 * w)
        - case.kernel().mean() * case.slope_second()?
        - mean_f)
}

fn check_envelope(lower: f64, upper: f64, slope: f64) -> Result<()> {
    let slack = ENVELOPE_SLACK * slope.abs().max(1.0);
    if lower - slack <= slope && slope <= upper + slack {
        Ok(())
    } else {
        Err(Error::EnvelopeInconsistent { lower, upper, slope })
    }
}

/// Published bounds `((b−a)²/3)(S − γ)` and `((b−a)²/3)(Γ − S)`.
pub fn envelope_bounds(case: &EvalCase) -> Result<(f64, f64)> {
    let s = case.slope_second()?;
    let env = case.envelope;
    check_envelope(env.lower, env.upper, s)?;
    let c = paper_sup_constant(case.iv.a, case.iv.b);
    Ok((c * (s - env.lower).max(0.0), c * (env.upper - s).max(0.0)))
}

/// The same chain with the true `sup|K − m|` in place of `(b−a)²/3`:
/// `sup_dev·(S − γ)` and `sup_dev·(Γ − S)`. Sound for every `x` when the
/// envelope is exact.
pub fn repaired_bounds(case: &EvalCase) -> Result<(f64, f64)> {
    let s = case.slope_second()?;
    let env = case.envelope;
    check_envelope(env.lower, env.upper, s)?;
    let sup = case.kernel().sup_deviation().sup_dev;
    Ok((sup * (s - env.lower).max(0.0), sup * (env.upper - s).max(0.0)))
}

/// `∫ₐᵇ |f''(t) − c| dt`, with the oracle split where `f'' − c` changes sign.
pub fn integral_abs_dev(case: &EvalCase, c: f64, tol: f64) -> Result<f64> {
    let d2 = case.d2();
    let (a, b) = (case.iv.a, case.iv.b);
    let kinks = sign_changes(|t| d2(t) - c, a, b);
    Ok(integrate_with_breaks(|t| (d2(t) - c).abs(), a, b, &kinks, tol)?.value)
}

/// Result of the midpoint-constant bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MidpointBound {
    /// `((b−a)²/3)(S − f''((a+b)/2))`
    pub rhs: f64,
    /// Whether `∫|f'' − f''(mid)| = (S − f''(mid))(b − a)` holds, the step the
    /// published bound relies on.
    pub assumption_holds: bool,
    pub abs_dev_integral: f64,
    /// `sup_dev · ∫|f'' − f''(mid)| / (b − a)`, always sound.
    pub repaired: f64,
}

pub fn midpoint_bound(case: &EvalCase, tols: &Tolerances) -> Result<MidpointBound> {
    let iv = case.iv;
    let s = case.slope_second()?;
    let c = case.func.second(iv.midpoint())?;
    let abs_dev = integral_abs_dev(case, c, tols.oracle)?;
    let assumed = (s - c) * iv.width();
    let assumption_holds = (abs_dev - assumed).abs() <= tols.identity * assumed.abs().max(1.0);
    let sup = case.kernel().sup_deviation().sup_dev;
    Ok(MidpointBound {
        rhs: paper_sup_constant(iv.a, iv.b) * (s - c),
        assumption_holds,
        abs_dev_integral: abs_dev,
        repaired: sup * abs_dev / iv.width(),
    })
}

/// Classical Ostrowski bound: `|f(x) − (1/(b−a))∫f|` against
/// `[1/4 + (x − (a+b)/2)²/(b−a)²](b−a)·M` with `M = sup|f'|`.
pub fn ostrowski_bound(case: &EvalCase, tol: f64) -> Result<(f64, f64)> {
    let (f, iv, x) = (case.func, case.iv, case.x);
    let w = iv.width();
    let lhs = (f.value(x)? - funcmodel::integral(f, iv, tol)? / w).abs();
    let (lo, hi) = first_derivative_range(f, iv)?;
    let m = lo.abs().max(hi.abs());
    let d = (x - iv.midpoint()) / w;
    Ok((lhs, (0.25 + d * d) * w * m))
}

/// `|f(x) − (x − (a+b)/2)·S₁ − (1/(b−a))∫f|` with `S₁ = (f(b) − f(a))/(b − a)`.
fn corrected_first_lhs(case: &EvalCase, tol: f64) -> Result<f64> {
    let (f, iv, x) = (case.func, case.iv, case.x);
    let s1 = slope_first(f, iv)?;
    let mean_f = funcmodel::integral(f, iv, tol)? / iv.width();
    Ok((f.value(x)? - (x - iv.midpoint()) * s1 - mean_f).abs())
}

/// First-derivative Grüss-type bounds `(b−a)/2·(S₁ − γ₁)` and
/// `(b−a)/2·(Γ₁ − S₁)`, with the exact range of `f'`.
pub fn corrected_first_bounds(case: &EvalCase, tol: f64) -> Result<(f64, f64, f64)> {
    let (f, iv) = (case.func, case.iv);
    let lhs = corrected_first_lhs(case, tol)?;
    let s1 = slope_first(f, iv)?;
    let (lo, hi) = first_derivative_range(f, iv)?;
    check_envelope(lo, hi, s1)?;
    let half = 0.5 * iv.width();
    Ok((lhs, half * (s1 - lo).max(0.0), half * (hi - s1).max(0.0)))
}

/// L2 bound `(b−a)^{3/2}/(2π√3)·‖f''‖₂` on the same left-hand side.
pub fn corrected_l2_bound(case: &EvalCase, tol: f64) -> Result<(f64, f64)> {
    let lhs = corrected_first_lhs(case, tol)?;
    let norm = l2_norm_second(case.func, case.iv, tol)?;
    let w = case.iv.width();
    Ok((lhs, w.powf(1.5) / (2.0 * PI * 3.0_f64.sqrt()) * norm))
}

/// Every checked relation, in report order.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Inequality {
    #[serde(rename = "identity")]
    Identity,
    #[serde(rename = "centering")]
    Centering,
    #[serde(rename = "eq11")]
    Ostrowski,
    #[serde(rename = "eq12")]
    FirstLower,
    #[serde(rename = "eq13")]
    FirstUpper,
    #[serde(rename = "eq14")]
    FirstL2,
    #[serde(rename = "repaired_gamma")]
    RepairedLower,
    #[serde(rename = "repaired_Gamma")]
    RepairedUpper,
    #[serde(rename = "repaired_midpoint")]
    RepairedMidpoint,
    #[serde(rename = "eq21")]
    PaperLower,
    #[serde(rename = "eq22")]
    PaperUpper,
    #[serde(rename = "eq21_stated")]
    StatedLower,
    #[serde(rename = "eq22_stated")]
    StatedUpper,
    #[serde(rename = "eq212")]
    PaperMidpoint,
}

impl Inequality {
    pub const ALL: [Inequality; 14] = [
        Inequality::Identity,
        Inequality::Centering,
        Inequality::Ostrowski,
        Inequality::FirstLower,
        Inequality::FirstUpper,
        Inequality::FirstL2,
        Inequality::RepairedLower,
        Inequality::RepairedUpper,
        Inequality::RepairedMidpoint,
        Inequality::PaperLower,
        Inequality::PaperUpper,
        Inequality::StatedLower,
        Inequality::StatedUpper,
        Inequality::PaperMidpoint,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Inequality::Identity => "identity",
            Inequality::Centering => "centering",
            Inequality::Ostrowski => "eq11",
            Inequality::FirstLower => "eq12",
            Inequality::FirstUpper => "eq13",
            Inequality::FirstL2 => "eq14",
            Inequality::RepairedLower => "repaired_gamma",
            Inequality::RepairedUpper => "repaired_Gamma",
            Inequality::RepairedMidpoint => "repaired_midpoint",
            Inequality::PaperLower => "eq21",
            Inequality::PaperUpper => "eq22",
            Inequality::StatedLower => "eq21_stated",
            Inequality::StatedUpper => "eq22_stated",
            Inequality::PaperMidpoint => "eq212",
        }
    }

    /// Mathematically guaranteed relations; a violation is a bug. The
    /// envelope-based repaired bounds are only guaranteed when the envelope
    /// is exact, see [`Check::class`].
    pub fn is_guaranteed(&self) -> bool {
        !matches!(
            self,
            Inequality::PaperLower
                | Inequality::PaperUpper
                | Inequality::StatedLower
                | Inequality::StatedUpper
                | Inequality::PaperMidpoint
        )
    }
}

impl std::fmt::Display for Inequality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationClass {
    Fatal,
    Finding,
}

/// One `lhs ≤ rhs` comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub inequality: Inequality,
    pub class: ViolationClass,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub ratio: Option<f64>,
    pub verdict: Verdict,
}

impl Check {
    fn new(
        inequality: Inequality,
        class: ViolationClass,
        sides: Option<(f64, f64)>,
        tols: &Tolerances,
    ) -> Self {
        let Some((lhs, rhs)) = sides else {
            return Check {
                inequality,
                class,
                lhs: None,
                rhs: None,
                ratio: None,
                verdict: Verdict::NotApplicable,
            };
        };
        let verdict = if lhs > rhs + tols.slack(rhs) {
            Verdict::Violated
        } else {
            Verdict::Holds
        };
        Check {
            inequality,
            class,
            lhs: Some(lhs),
            rhs: Some(rhs),
            ratio: (rhs > 0.0).then(|| lhs.abs() / rhs),
            verdict,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidePair {
    pub lhs: f64,
    pub rhs: f64,
}

/// Everything computed for one case. Fields that depend on a failed
/// sub-computation are `None` and the error text is kept in `errors`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub case_index: usize,
    #[serde(rename = "fn")]
    pub fn_id: String,
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub envelope: DerivativeEnvelope,
    pub slope_second: Option<f64>,
    pub kernel: KernelSummary,
    pub paper_sup_constant: f64,
    pub identity_residual: Option<f64>,
    pub centered_mean_residual: Option<f64>,
    pub remainder: Option<f64>,
    pub lhs_stated: Option<f64>,
    pub lhs_derived: Option<f64>,
    pub rhs_21: Option<f64>,
    pub rhs_22: Option<f64>,
    pub rhs_212: Option<f64>,
    pub assumption_holds: Option<bool>,
    pub rhs_repaired_gamma: Option<f64>,
    #[serde(rename = "rhs_repaired_Gamma")]
    pub rhs_repaired_upper: Option<f64>,
    pub rhs_repaired_midpoint: Option<f64>,
    pub baseline_11: Option<SidePair>,
    pub baseline_12: Option<SidePair>,
    pub baseline_13: Option<SidePair>,
    pub baseline_14: Option<SidePair>,
    pub checks: Vec<Check>,
    pub flags: BTreeMap<Inequality, Verdict>,
    pub tightness: BTreeMap<Inequality, f64>,
    pub errors: Vec<String>,
}

impl BoundReport {
    pub fn check(&self, inequality: Inequality) -> Option<&Check> {
        self.checks.iter().find(|c| c.inequality == inequality)
    }

    pub fn verdict(&self, inequality: Inequality) -> Verdict {
        self.flags
            .get(&inequality)
            .copied()
            .unwrap_or(Verdict::NotApplicable)
    }

    pub fn fatal_violations(&self) -> impl Iterator<Item = &Check> {
        self.checks
            .iter()
            .filter(|c| c.class == ViolationClass::Fatal && c.verdict == Verdict::Violated)
    }
}

/// Evaluates every identity and bound for `case`.
pub fn evaluate_case(case: &EvalCase, case_index: usize, tols: &Tolerances) -> BoundReport {
    let mut errors = Vec::new();
    fn keep<T>(errors: &mut Vec<String>, r: Result<T>) -> Option<T> {
        r.map_err(|e| errors.push(e.to_string())).ok()
    }

    let (a, b, x) = (case.iv.a, case.iv.b, case.x);
    let kernel = case.kernel();
    let summary = kernel.sup_deviation();
    let sup_constant = paper_sup_constant(a, b);

    let slope = keep(&mut errors, case.slope_second());
    let identity = keep(&mut errors, identity_residual(case, tols.oracle));
    let centering = keep(&mut errors, kernel.centered_mean_residual(tols.oracle));
    let rem = keep(&mut errors, remainder(case, tols.oracle));
    let stated = keep(&mut errors, lhs_stated(case, tols.oracle));
    let paper = keep(&mut errors, envelope_bounds(case));
    let repaired = keep(&mut errors, repaired_bounds(case));
    let midpoint = keep(&mut errors, midpoint_bound(case, tols));
    let b11 = keep(&mut errors, ostrowski_bound(case, tols.oracle));
    let b1x = keep(&mut errors, corrected_first_bounds(case, tols.oracle));
    let b14 = keep(&mut errors, corrected_l2_bound(case, tols.oracle));

    let derived = rem.map(f64::abs);
    let envelope_class = if case.envelope.exact {
        ViolationClass::Fatal
    } else {
        ViolationClass::Finding
    };
    let both = |l: Option<f64>, r: Option<f64>| l.zip(r);

    use Inequality as I;
    use ViolationClass::{Fatal, Finding};
    let checks = vec![
        Check::new(
            I::Identity,
            Fatal,
            identity.map(|c| (c.residual.abs(), tols.identity * c.scale)),
            tols,
        ),
        Check::new(
            I::Centering,
            Fatal,
            centering.map(|r| (r.abs(), tols.oracle)),
            tols,
        ),
        Check::new(I::Ostrowski, Fatal, b11, tols),
        Check::new(I::FirstLower, Fatal, b1x.map(|(l, r, _)| (l, r)), tols),
        Check::new(I::FirstUpper, Fatal, b1x.map(|(l, _, r)| (l, r)), tols),
        Check::new(I::FirstL2, Fatal, b14, tols),
        Check::new(
            I::RepairedLower,
            envelope_class,
            both(derived, repaired.map(|r| r.0)),
            tols,
        ),
        Check::new(
            I::RepairedUpper,
            envelope_class,
            both(derived, repaired.map(|r| r.1)),
            tols,
        ),
        Check::new(
            I::RepairedMidpoint,
            Fatal,
            both(derived, midpoint.map(|m| m.repaired)),
            tols,
        ),
        Check::new(I::PaperLower, Finding, both(derived, paper.map(|p| p.0)), tols),
        Check::new(I::PaperUpper, Finding, both(derived, paper.map(|p| p.1)), tols),
        Check::new(
            I::StatedLower,
            Finding,
            both(stated.map(f64::abs), paper.map(|p| p.0)),
            tols,
        ),
        Check::new(
            I::StatedUpper,
            Finding,
            both(stated.map(f64::abs), paper.map(|p| p.1)),
            tols,
        ),
        Check::new(
            I::PaperMidpoint,
            Finding,
            both(derived, midpoint.map(|m| m.rhs)),
            tols,
        ),
    ];

    let flags = checks.iter().map(|c| (c.inequality, c.verdict)).collect();
    let tightness = checks
        .iter()
        .filter_map(|c| c.ratio.map(|r| (c.inequality, r)))
        .collect();
    let pair = |(lhs, rhs): (f64, f64)| SidePair { lhs, rhs };

    BoundReport {
        case_index,
        fn_id: case.func.id.to_string(),
        a,
        b,
        x,
        envelope: case.envelope,
        slope_second: slope,
        kernel: summary,
        paper_sup_constant: sup_constant,
        identity_residual: identity.map(|c| c.residual),
        centered_mean_residual: centering,
        remainder: rem,
        lhs_stated: stated,
        lhs_derived: derived,
        rhs_21: paper.map(|p| p.0),
        rhs_22: paper.map(|p| p.1),
        rhs_212: midpoint.map(|m| m.rhs),
        assumption_holds: midpoint.map(|m| m.assumption_holds),
        rhs_repaired_gamma: repaired.map(|r| r.0),
        rhs_repaired_upper: repaired.map(|r| r.1),
        rhs_repaired_midpoint: midpoint.map(|m| m.repaired),
        baseline_11: b11.map(pair),
        baseline_12: b1x.map(|(l, r, _)| pair((l, r))),
        baseline_13: b1x.map(|(l, _, r)| pair((l, r))),
        baseline_14: b14.map(pair),
        checks,
        flags,
        tightness,
        errors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-10;

    fn case(id: &str, a: f64, b: f64, x: f64) -> EvalCase {
        EvalCase::from_id(id, a, b, x).unwrap()
    }

    fn close(got: f64, want: f64, tol: f64) {
        assert!((got - want).abs() <= tol, "got {got}, want {want}");
    }

    #[test]
    fn case_validation() {
        assert!(EvalCase::from_id("cube", 0.0, 1.0, 1.5).is_err());
        assert!(EvalCase::from_id("logshift", -1.0, 1.0, 0.0).is_err());
        assert!(EvalCase::from_id("nope", 0.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn identity_examples() {
        let c = identity_residual(&case("cube", 1.0, 2.0, 1.5), TOL).unwrap();
        close(c.kernel_side, -12.0, 1e-10);
        close(c.closed_side, -12.0, 1e-10);
        let c = identity_residual(&case("linear", 0.0, 1.0, 0.3), TOL).unwrap();
        assert_eq!(c.kernel_side, 0.0);
        assert!(c.residual.abs() < 1e-12);
        let c = identity_residual(&case("expfn", 0.0, 1.0, 0.5), TOL).unwrap();
        assert!(c.residual.abs() <= 1e-9);
    }

    #[test]
    fn remainder_examples() {
        close(remainder(&case("cube", 0.0, 1.0, 0.5), TOL).unwrap(), -0.375, 1e-10);
        close(remainder(&case("cube", 1.0, 2.0, 1.5), TOL).unwrap(), -1.125, 1e-10);
        assert_eq!(remainder(&case("linear", -1.0, 3.0, 0.2), TOL).unwrap(), 0.0);
    }

    #[test]
    fn remainder_does_not_depend_on_the_constant() {
        let c = case("expfn", 0.0, 2.0, 0.7);
        let base = remainder(&c, TOL).unwrap();
        for k in [0.0, c.envelope.lower, c.envelope.upper, 17.3] {
            close(remainder_with_constant(&c, k, TOL).unwrap(), base, 1e-9);
        }
    }

    #[test]
    fn lhs_stated_examples() {
        close(lhs_stated(&case("cube", 1.0, 2.0, 1.5), TOL).unwrap(), 22.875, 1e-10);
        close(lhs_stated(&case("cube", 0.0, 1.0, 0.5), TOL).unwrap(), 1.625, 1e-10);
        assert!(lhs_stated(&case("linear", 0.0, 1.0, 0.5), TOL).unwrap().abs() < 1e-12);
    }

    #[test]
    fn envelope_bound_examples() {
        assert_eq!(envelope_bounds(&case("cube", 0.0, 1.0, 0.5)).unwrap(), (1.0, 1.0));
        assert_eq!(envelope_bounds(&case("cube", 1.0, 2.0, 1.5)).unwrap(), (1.0, 1.0));
        assert_eq!(envelope_bounds(&case("linear", 0.0, 1.0, 0.5)).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn envelope_bound_rejects_inconsistent_envelope() {
        let mut c = case("cube", 0.0, 1.0, 0.5);
        c.envelope.lower = 4.0;
        assert!(matches!(
            envelope_bounds(&c),
            Err(Error::EnvelopeInconsistent { .. })
        ));
        assert!(repaired_bounds(&c).is_err());
    }

    #[test]
    fn repaired_examples() {
        let (l, u) = repaired_bounds(&case("cube", 1.0, 2.0, 1.5)).unwrap();
        close(l, 2.5, 1e-14);
        close(u, 2.5, 1e-14);
        let (l, u) = repaired_bounds(&case("cube", 0.0, 1.0, 0.5)).unwrap();
        close(l, 1.0, 1e-14);
        close(u, 1.0, 1e-14);
        assert_eq!(repaired_bounds(&case("linear", 2.0, 3.0, 2.5)).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn integral_abs_dev_examples() {
        close(integral_abs_dev(&case("cube", 1.0, 2.0, 1.5), 6.0, TOL).unwrap(), 3.0, 1e-10);
        close(integral_abs_dev(&case("cube", 0.0, 1.0, 0.5), 3.0, TOL).unwrap(), 1.5, 1e-10);
        assert_eq!(integral_abs_dev(&case("square", 0.0, 1.0, 0.5), 2.0, TOL).unwrap(), 0.0);
    }

    #[test]
    fn midpoint_examples() {
        let tols = Tolerances::default();
        let m = midpoint_bound(&case("cube", 0.0, 1.0, 0.5), &tols).unwrap();
        assert_eq!(m.rhs, 0.0);
        assert!(!m.assumption_holds);
        let m = midpoint_bound(&case("square", 0.0, 1.0, 0.3), &tols).unwrap();
        assert_eq!(m.rhs, 0.0);
        assert!(m.assumption_holds);
        // quartic: S = 4, f''(1/2) = 3; ∫|12t² − 3| on [0,1] splits at t = 1/2:
        // [3t − 4t³]₀^½ + [4t³ − 3t]_½^1 = 1 + 2 = 3 ≠ (4 − 3)·1
        let m = midpoint_bound(&case("quartic", 0.0, 1.0, 0.5), &tols).unwrap();
        close(m.rhs, 1.0 / 3.0, 1e-15);
        close(m.abs_dev_integral, 3.0, 1e-10);
        assert!(!m.assumption_holds);
    }

    #[test]
    fn ostrowski_examples() {
        let (l, r) = ostrowski_bound(&case("square", 0.0, 1.0, 0.5), TOL).unwrap();
        close(l, 1.0 / 12.0, 1e-12);
        close(r, 0.5, 1e-15);
        let (l, r) = ostrowski_bound(&case("square", 0.0, 1.0, 1.0), TOL).unwrap();
        close(l, 2.0 / 3.0, 1e-12);
        close(r, 1.0, 1e-15);
        let (l, _) = ostrowski_bound(&case("linear", 1.0, 3.0, 2.0), TOL).unwrap();
        assert!(l < 1e-12);
    }

    #[test]
    fn first_derivative_examples() {
        let (l, r12, r13) = corrected_first_bounds(&case("square", 0.0, 1.0, 0.0), TOL).unwrap();
        close(l, 1.0 / 6.0, 1e-12);
        assert_eq!((r12, r13), (0.5, 0.5));
        let (l, _, _) = corrected_first_bounds(&case("linear", -2.0, 1.0, 0.4), TOL).unwrap();
        assert!(l < 1e-12);
        let (l, r12, r13) = corrected_first_bounds(&case("cube", 0.0, 1.0, 0.5), TOL).unwrap();
        close(l, 0.125, 1e-12);
        assert_eq!((r12, r13), (0.5, 1.0));
    }

    #[test]
    fn l2_examples() {
        let (l, r) = corrected_l2_bound(&case("square", 0.0, 1.0, 0.0), TOL).unwrap();
        close(l, 1.0 / 6.0, 1e-12);
        close(r, 1.0 / (PI * 3.0_f64.sqrt()), 1e-12);
        assert!(l < r);
        let (l, r) = corrected_l2_bound(&case("linear", 0.0, 1.0, 0.5), TOL).unwrap();
        assert!(l < 1e-12);
        assert_eq!(r, 0.0);
        let (l, r) = corrected_l2_bound(&case("cube", 0.0, 1.0, 0.5), TOL).unwrap();
        close(l, 0.125, 1e-12);
        close(r, 1.0 / PI, 1e-11);
    }

    #[test]
    fn report_for_off_origin_counterexample() {
        let r = evaluate_case(&case("cube", 1.0, 2.0, 1.5), 0, &Tolerances::default());
        assert!(r.errors.is_empty(), "{:?}", r.errors);
        close(r.lhs_derived.unwrap(), 1.125, 1e-10);
        assert_eq!(r.rhs_21, Some(1.0));
        assert_eq!(r.verdict(Inequality::PaperLower), Verdict::Violated);
        close(r.rhs_repaired_gamma.unwrap(), 2.5, 1e-14);
        assert_eq!(r.verdict(Inequality::RepairedLower), Verdict::Holds);
        assert_eq!(r.fatal_violations().count(), 0);
    }

    #[test]
    fn report_for_linear_is_all_zero() {
        let r = evaluate_case(&case("linear", 0.0, 1.0, 0.5), 3, &Tolerances::default());
        assert_eq!(r.case_index, 3);
        for v in [r.remainder, r.lhs_stated, r.lhs_derived] {
            assert!(v.unwrap().abs() < 1e-12);
        }
        for ineq in Inequality::ALL {
            assert_eq!(r.verdict(ineq), Verdict::Holds, "{ineq}");
        }
        // zero right-hand sides carry no tightness ratio
        assert!(!r.tightness.contains_key(&Inequality::PaperLower));
    }

    #[test]
    fn report_exposes_stated_form_discrepancy() {
        let r = evaluate_case(&case("cube", 0.0, 1.0, 0.5), 0, &Tolerances::default());
        close(r.lhs_derived.unwrap(), 0.375, 1e-10);
        assert_eq!(r.verdict(Inequality::PaperLower), Verdict::Holds);
        close(r.lhs_stated.unwrap(), 1.625, 1e-10);
        assert_eq!(r.verdict(Inequality::StatedLower), Verdict::Violated);
        assert_eq!(r.verdict(Inequality::PaperMidpoint), Verdict::Violated);
        assert_eq!(r.assumption_holds, Some(false));
    }

    #[test]
    fn ratios_are_nonnegative_and_match_flags() {
        let tols = Tolerances::default();
        let r = evaluate_case(&case("sine", -1.0, 1.0, 0.1), 0, &tols);
        for c in &r.checks {
            if let Some(ratio) = c.ratio {
                assert!(ratio >= 0.0);
            }
            assert_eq!(r.flags[&c.inequality], c.verdict);
        }
        // grid envelope: envelope-based repaired checks are not fatal
        assert!(!r.envelope.exact);
        assert_eq!(
            r.check(Inequality::RepairedLower).unwrap().class,
            ViolationClass::Finding
        );
    }
}
