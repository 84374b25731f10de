//! Test functions with exact derivatives, derivative envelopes, and the
//! quadrature oracle.

mod corpus;
pub mod quadrature;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use quadrature::{integrate, integrate_with_breaks, sign_changes, QuadratureResult};

/// Default number of grid cells used for inexact envelopes.
pub const DEFAULT_ENVELOPE_GRID: usize = 10_000;

/// How `f''` behaves on the whole safe domain.
///
/// `Increasing` and `Decreasing` are meant in the non-strict sense; a constant
/// `f''` is listed as `Increasing`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    None,
}

/// Open interval on which all evaluators of a function are finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SafeDomain {
    pub lower: f64,
    pub upper: f64,
}

impl SafeDomain {
    pub const REAL_LINE: SafeDomain = SafeDomain {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };

    pub fn contains(&self, t: f64) -> bool {
        t.is_finite() && self.lower < t && t < self.upper
    }
}

/// A closed interval `[a, b]` with finite `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Interval { a, b })
        } else {
            Err(Error::InvalidInterval { a, b })
        }
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    /// `n` uniformly spaced points from `a` to `b` inclusive; `n >= 2`.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        assert!(n >= 2, "grid needs at least two points");
        let h = self.width() / (n - 1) as f64;
        (0..n)
            .map(|i| if i == n - 1 { self.b } else { self.a + i as f64 * h })
            .collect()
    }
}

/// A corpus function with closed-form `f`, `f'`, `f''`.
#[derive(Debug)]
pub struct TestFunction {
    pub id: &'static str,
    f: fn(f64) -> f64,
    d1: fn(f64) -> f64,
    d2: fn(f64) -> f64,
    antiderivative: Option<fn(f64) -> f64>,
    pub d2_monotonicity: Monotonicity,
    pub safe_domain: SafeDomain,
    /// Points in the open interval where `f''` vanishes; the only interior
    /// candidates for extrema of `f'`.
    d2_zeros: fn(f64, f64) -> Vec<f64>,
}

impl TestFunction {
    /// Evaluates `f` (order 0), `f'` (1) or `f''` (2) at `t`.
    pub fn evaluate(&self, order: u8, t: f64) -> Result<f64> {
        let eval = match order {
            0 => self.f,
            1 => self.d1,
            2 => self.d2,
            _ => return Err(Error::DerivativeOrder(order)),
        };
        let domain_err = || Error::Domain {
            id: self.id.to_string(),
            order,
            t,
        };
        if !self.safe_domain.contains(t) {
            return Err(domain_err());
        }
        let v = eval(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(domain_err())
        }
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        self.evaluate(0, t)
    }

    pub fn first(&self, t: f64) -> Result<f64> {
        self.evaluate(1, t)
    }

    pub fn second(&self, t: f64) -> Result<f64> {
        self.evaluate(2, t)
    }

    /// Raw evaluator of the requested order, for use as an integrand after
    /// the interval has been checked with [`TestFunction::check_interval`].
    pub(crate) fn raw(&self, order: u8) -> fn(f64) -> f64 {
        match order {
            0 => self.f,
            1 => self.d1,
            _ => self.d2,
        }
    }

    /// `∫ₐᵇ f` from the closed-form antiderivative, when one is known.
    pub fn analytic_integral(&self, iv: Interval) -> Option<f64> {
        self.antiderivative.map(|anti| anti(iv.b) - anti(iv.a))
    }

    pub fn check_interval(&self, iv: Interval) -> Result<()> {
        if self.safe_domain.contains(iv.a) && self.safe_domain.contains(iv.b) {
            Ok(())
        } else {
            Err(Error::OutsideSafeDomain {
                id: self.id.to_string(),
                a: iv.a,
                b: iv.b,
            })
        }
    }

    pub fn has_exact_envelope(&self) -> bool {
        self.d2_monotonicity != Monotonicity::None
    }
}

/// All compiled-in functions, in a fixed order.
pub fn corpus() -> &'static [TestFunction] {
    &corpus::CORPUS
}

pub fn corpus_ids() -> Vec<&'static str> {
    corpus().iter().map(|f| f.id).collect()
}

pub fn lookup(id: &str) -> Result<&'static TestFunction> {
    corpus()
        .iter()
        .find(|f| f.id == id)
        .ok_or_else(|| Error::UnknownFunction {
            id: id.to_string(),
            valid: corpus_ids().join(", "),
        })
}

/// Lower and upper bounds `γ ≤ f'' ≤ Γ` on an interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeEnvelope {
    #[serde(rename = "gamma")]
    pub lower: f64,
    #[serde(rename = "Gamma")]
    pub upper: f64,
    pub exact: bool,
}

/// Envelope of `f''` on `iv`.
///
/// Monotone `f''` gives the exact envelope from the endpoints. Otherwise the
/// min/max over `n_grid + 1` uniform samples is returned with `exact = false`;
/// no inflation is applied, so a grid envelope may be slightly too narrow.
pub fn envelope(func: &TestFunction, iv: Interval, n_grid: usize) -> Result<DerivativeEnvelope> {
    if n_grid < 2 {
        return Err(Error::Config(format!("envelope grid must have n_grid >= 2, got {n_grid}")));
    }
    func.check_interval(iv)?;
    let at_a = func.second(iv.a)?;
    let at_b = func.second(iv.b)?;
    match func.d2_monotonicity {
        Monotonicity::Increasing => Ok(DerivativeEnvelope {
            lower: at_a,
            upper: at_b,
            exact: true,
        }),
        Monotonicity::Decreasing => Ok(DerivativeEnvelope {
            lower: at_b,
            upper: at_a,
            exact: true,
        }),
        Monotonicity::None => {
            let mut lower = f64::INFINITY;
            let mut upper = f64::NEG_INFINITY;
            for t in iv.grid(n_grid + 1) {
                let v = func.second(t)?;
                lower = lower.min(v);
                upper = upper.max(v);
            }
            Ok(DerivativeEnvelope {
                lower,
                upper,
                exact: false,
            })
        }
    }
}

/// Exact range of `f'` on `iv`, from the endpoints and the interior zeros
/// of `f''`.
pub fn first_derivative_range(func: &TestFunction, iv: Interval) -> Result<(f64, f64)> {
    func.check_interval(iv)?;
    let mut lower = f64::INFINITY;
    let mut upper = f64::NEG_INFINITY;
    let candidates = [iv.a, iv.b].into_iter().chain((func.d2_zeros)(iv.a, iv.b));
    for t in candidates {
        let v = func.first(t)?;
        lower = lower.min(v);
        upper = upper.max(v);
    }
    Ok((lower, upper))
}

/// `(f(b) − f(a)) / (b − a)`.
pub fn slope_first(func: &TestFunction, iv: Interval) -> Result<f64> {
    Ok((func.value(iv.b)? - func.value(iv.a)?) / iv.width())
}

/// `(f'(b) − f'(a)) / (b − a)`, the mean value of `f''` on `iv`.
pub fn slope_second(func: &TestFunction, iv: Interval) -> Result<f64> {
    Ok((func.first(iv.b)? - func.first(iv.a)?) / iv.width())
}

/// `‖f''‖₂` on `iv`, via the oracle.
pub fn l2_norm_second(func: &TestFunction, iv: Interval, tol: f64) -> Result<f64> {
    func.check_interval(iv)?;
    let d2 = func.raw(2);
    let r = integrate(|t| d2(t) * d2(t), iv, tol)?;
    Ok(r.value.max(0.0).sqrt())
}

/// `∫ₐᵇ f` via the oracle.
pub fn integral(func: &TestFunction, iv: Interval, tol: f64) -> Result<f64> {
    func.check_interval(iv)?;
    Ok(integrate(func.raw(0), iv, tol)?.value)
}
