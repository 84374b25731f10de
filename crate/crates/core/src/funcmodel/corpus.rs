//! The compiled-in test functions.

use std::f64::consts::PI;

use super::{Monotonicity, SafeDomain, TestFunction};

fn no_zeros(_: f64, _: f64) -> Vec<f64> {
    Vec::new()
}

fn origin_zero(a: f64, b: f64) -> Vec<f64> {
    if a < 0.0 && 0.0 < b {
        vec![0.0]
    } else {
        Vec::new()
    }
}

fn sine_zeros(a: f64, b: f64) -> Vec<f64> {
    let first = (a / PI).floor() as i64;
    let last = (b / PI).ceil() as i64;
    (first..=last)
        .map(|k| k as f64 * PI)
        .filter(|&t| a < t && t < b)
        .collect()
}

fn runge_zeros(a: f64, b: f64) -> Vec<f64> {
    let r = 1.0 / 3.0_f64.sqrt();
    [-r, r].into_iter().filter(|&t| a < t && t < b).collect()
}

fn runge(t: f64) -> f64 {
    1.0 / (1.0 + t * t)
}

fn runge_d1(t: f64) -> f64 {
    let q = 1.0 + t * t;
    -2.0 * t / (q * q)
}

fn runge_d2(t: f64) -> f64 {
    let q = 1.0 + t * t;
    (6.0 * t * t - 2.0) / (q * q * q)
}

fn log_shift(t: f64) -> f64 {
    t.ln_1p()
}

fn log_shift_d1(t: f64) -> f64 {
    1.0 / (1.0 + t)
}

fn log_shift_d2(t: f64) -> f64 {
    let q = 1.0 + t;
    -1.0 / (q * q)
}

fn log_shift_antiderivative(t: f64) -> f64 {
    (1.0 + t) * t.ln_1p() - t
}

pub(super) static CORPUS: [TestFunction; 8] = [
    TestFunction {
        id: "cube",
        f: |t| t * t * t,
        d1: |t| 3.0 * t * t,
        d2: |t| 6.0 * t,
        antiderivative: Some(|t| t * t * t * t / 4.0),
        d2_monotonicity: Monotonicity::Increasing,
        safe_domain: SafeDomain::REAL_LINE,
        d2_zeros: origin_zero,
    },
    TestFunction {
        id: "square",
        f: |t| t * t,
        d1: |t| 2.0 * t,
        d2: |_| 2.0,
        antiderivative: Some(|t| t * t * t / 3.0),
        d2_monotonicity: Monotonicity::Increasing,
        safe_domain: SafeDomain::REAL_LINE,
        d2_zeros: no_zeros,
    },
    TestFunction {
        id: "quartic",
        f: |t| t * t * t * t,
        d1: |t| 4.0 * t * t * t,
        d2: |t| 12.0 * t * t,
        antiderivative: Some(|t| t.powi(5) / 5.0),
        d2_monotonicity: Monotonicity::None,
        safe_domain: SafeDomain::REAL_LINE,
        d2_zeros: no_zeros,
    },
    TestFunction {
        id: "expfn",
        f: f64::exp,
        d1: f64::exp,
        d2: f64::exp,
        antiderivative: Some(f64::exp),
        d2_monotonicity: Monotonicity::Increasing,
        safe_domain: SafeDomain::REAL_LINE,
        d2_zeros: no_zeros,
    },
    TestFunction {
        id: "sine",
        f: f64::sin,
        d1: f64::cos,
        d2: |t| -t.sin(),
        antiderivative: Some(|t| -t.cos()),
        d2_monotonicity: Monotonicity::None,
        safe_domain: SafeDomain::REAL_LINE,
        d2_zeros: sine_zeros,
    },
    TestFunction {
        id: "runge",
        f: runge,
        d1: runge_d1,
        d2: runge_d2,
        antiderivative: Some(f64::atan),
        d2_monotonicity: Monotonicity::None,
        safe_domain: SafeDomain::REAL_LINE,
        d2_zeros: runge_zeros,
    },
    TestFunction {
        id: "logshift",
        f: log_shift,
        d1: log_shift_d1,
        d2: log_shift_d2,
        antiderivative: Some(log_shift_antiderivative),
        d2_monotonicity: Monotonicity::Increasing,
        safe_domain: SafeDomain {
            lower: -1.0,
            upper: f64::INFINITY,
        },
        d2_zeros: no_zeros,
    },
    TestFunction {
        id: "linear",
        f: |t| 2.0 * t + 1.0,
        d1: |_| 2.0,
        d2: |_| 0.0,
        antiderivative: Some(|t| t * t + t),
        d2_monotonicity: Monotonicity::Increasing,
        safe_domain: SafeDomain::REAL_LINE,
        d2_zeros: no_zeros,
    },
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_zeros_are_interior_multiples_of_pi() {
        assert_eq!(sine_zeros(0.0, 1.0), Vec::<f64>::new());
        assert_eq!(sine_zeros(-1.0, 4.0), vec![0.0, PI]);
        assert_eq!(sine_zeros(0.0, PI), Vec::<f64>::new());
    }

    #[test]
    fn runge_second_derivative_vanishes_at_zeros() {
        for t in runge_zeros(-1.0, 1.0) {
            assert!(runge_d2(t).abs() < 1e-15);
        }
    }
}
