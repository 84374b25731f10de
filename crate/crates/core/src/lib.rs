//! Ostrowski–Grüss type error bounds for twice differentiable functions.
//!
//! The crate evaluates the piecewise quadratic kernel behind the bounds, the
//! integration-by-parts identity it satisfies, the remainder functional, and
//! every bound built from it, all checked against an adaptive Gauss–Kronrod
//! oracle. The [`harness`] module sweeps these over a small corpus of test
//! functions, searches for counterexamples to the published constants, and
//! runs the suite of relations that must never fail.
//!
//! ```
//! use ostrogruss::{evaluate_case, EvalCase, Inequality, Tolerances, Verdict};
//!
//! let case = EvalCase::from_id("cube", 1.0, 2.0, 1.5).unwrap();
//! let report = evaluate_case(&case, 0, &Tolerances::default());
//! assert!((report.lhs_derived.unwrap() - 1.125).abs() < 1e-8);
//! assert_eq!(report.verdict(Inequality::PaperLower), Verdict::Violated);
//! assert_eq!(report.verdict(Inequality::RepairedLower), Verdict::Holds);
//! ```

pub mod bounds;
pub mod error;
pub mod funcmodel;
pub mod harness;
pub mod kernel;

pub use bounds::{
    evaluate_case, BoundReport, Check, EvalCase, Inequality, Tolerances, Verdict, ViolationClass,
};
pub use error::{Error, Result};
pub use funcmodel::{
    corpus, lookup, DerivativeEnvelope, Interval, QuadratureResult, TestFunction,
};
pub use harness::{
    emit_report, run_sweep, search_counterexamples, ReportFormat, RunReport, SearchConfig,
    SweepConfig, Target,
};
pub use kernel::{paper_sup_constant, KernelSpec, KernelSummary};
