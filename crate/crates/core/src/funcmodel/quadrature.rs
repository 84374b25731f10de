//! Adaptive Gauss–Kronrod quadrature used as the reference integrator.
//!
//! Every integral in the crate goes through [`integrate`] or
//! [`integrate_with_breaks`]: a globally adaptive bisection over 21-point
//! Kronrod panels, with the embedded 10-point Gauss rule providing the error
//! estimate. The panel with the largest estimate is split until the summed
//! estimate drops below the requested absolute tolerance. Known kinks and
//! jumps should be passed as breakpoints so that no panel straddles them.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::Interval;
use crate::error::{Error, Result};

/// Default absolute tolerance of the oracle.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Hard cap on live panels before the oracle gives up.
pub const MAX_PANELS: usize = 1_000_000;
/// Width at which sign-change bisection stops.
pub const ROOT_TOL: f64 = 1e-13;
/// Uniform samples used to bracket sign changes before bisection.
pub const SIGN_SCAN_POINTS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub subdivisions: usize,
}

// Abscissae and weights of the 21-point Kronrod rule and its embedded
// 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Largest error first; ties broken by position so the heap order (and
    // therefore the result) never depends on insertion history.
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn sample<G: Fn(f64) -> f64>(g: &G, t: f64) -> Result<f64> {
    let v = g(t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteIntegrand { t })
    }
}

fn kronrod21<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = sample(g, center)?;
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;

    for (j, wg) in WG.iter().enumerate() {
        let k = 2 * j + 1;
        let dx = half * XGK[k];
        let pair = sample(g, center - dx)? + sample(g, center + dx)?;
        res_g += wg * pair;
        res_k += WGK[k] * pair;
    }
    for j in 0..5 {
        let k = 2 * j;
        let dx = half * XGK[k];
        let pair = sample(g, center - dx)? + sample(g, center + dx)?;
        res_k += WGK[k] * pair;
    }

    Ok(Panel {
        a,
        b,
        value: res_k * half,
        err: ((res_k - res_g) * half).abs(),
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut carry = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Integrates `g` over `iv` to absolute tolerance `tol`.
pub fn integrate<G: Fn(f64) -> f64>(g: G, iv: Interval, tol: f64) -> Result<QuadratureResult> {
    integrate_with_breaks(g, iv.a, iv.b, &[], tol)
}

/// Integrates `g` over `[a, b]` with the initial panels cut at `breaks`.
///
/// `a == b` is allowed and yields zero. Breakpoints outside the open interval
/// are ignored. Panels never evaluate `g` at their own endpoints, so a
/// breakpoint may sit exactly on a jump of `g`.
pub fn integrate_with_breaks<G: Fn(f64) -> f64>(
    g: G,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
) -> Result<QuadratureResult> {
    check_tol(tol)?;
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::InvalidInterval { a, b });
    }

    let mut cuts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    cuts.push(a);
    cuts.extend(breaks.iter().copied().filter(|&t| t > a && t < b));
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod21(&g, w[0], w[1])?);
        }
    }

    let mut total_err = compensated_sum(heap.iter().map(|p| p.err));
    while total_err > tol {
        if heap.len() >= MAX_PANELS {
            return Err(Error::OracleNonConvergence {
                a,
                b,
                error_estimate: total_err,
                tol,
                subdivisions: heap.len(),
            });
        }
        let worst = heap.pop().expect("non-empty when error is positive");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            heap.push(worst);
            return Err(Error::OracleNonConvergence {
                a,
                b,
                error_estimate: total_err,
                tol,
                subdivisions: heap.len(),
            });
        }
        let left = kronrod21(&g, worst.a, mid)?;
        let right = kronrod21(&g, mid, worst.b)?;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        if total_err <= tol {
            // resync the running sum before accepting
            total_err = compensated_sum(heap.iter().map(|p| p.err));
        }
    }

    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    Ok(QuadratureResult {
        value: compensated_sum(panels.iter().map(|p| p.value)),
        abs_error_estimate: compensated_sum(panels.iter().map(|p| p.err)),
        subdivisions: panels.len(),
    })
}

/// Locates the points in `(a, b)` where `g` changes sign.
///
/// `g` is scanned on [`SIGN_SCAN_POINTS`] uniform cells; every bracketed
/// change is refined by bisection to width [`ROOT_TOL`]. Sampled exact zeros
/// strictly inside the interval are reported as-is. Touching zeros that do
/// not change sign are not reported (they introduce no kink in `|g|`).
pub fn sign_changes<G: Fn(f64) -> f64>(g: G, a: f64, b: f64) -> Vec<f64> {
    let n = SIGN_SCAN_POINTS;
    let h = (b - a) / n as f64;
    let node = |i: usize| if i == n { b } else { a + i as f64 * h };

    let mut roots = Vec::new();
    let mut left = a;
    let mut g_left = g(a);
    for i in 1..=n {
        let right = node(i);
        let g_right = g(right);
        if g_left == 0.0 && left > a && left < b {
            roots.push(left);
        } else if g_left.is_finite() && g_right.is_finite() && g_left * g_right < 0.0 {
            let (mut lo, mut hi, mut g_lo) = (left, right, g_left);
            while hi - lo > ROOT_TOL {
                let mid = 0.5 * (lo + hi);
                if !(lo < mid && mid < hi) {
                    break;
                }
                let g_mid = g(mid);
                if g_mid == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (g_mid < 0.0) == (g_lo < 0.0) {
                    lo = mid;
                    g_lo = g_mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        left = right;
        g_left = g_right;
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn cubic_on_unit_interval() {
        let r = integrate(|t| t * t * t, unit(), 1e-10).unwrap();
        assert!((r.value - 0.25).abs() < 1e-14);
        assert!(r.abs_error_estimate <= 1e-10);
    }

    #[test]
    fn derivative_difference_of_cube() {
        let r = integrate(|t| 6.0 * t, Interval::new(1.0, 2.0).unwrap(), 1e-10).unwrap();
        assert!((r.value - 9.0).abs() < 1e-13);
    }

    #[test]
    fn kinked_absolute_value() {
        // exact: two triangles of area 0.75 each
        let oracle = 0.5 * 0.5 * 3.0 + 0.5 * 0.5 * 3.0;
        let r = integrate(|t: f64| (6.0 * t - 3.0).abs(), unit(), 1e-10).unwrap();
        assert!((r.value - oracle).abs() <= 1e-10);
        assert!(r.abs_error_estimate <= 1e-10);
    }

    #[test]
    fn off_grid_kink_still_converges() {
        let k = 0.3141;
        let oracle = 0.5 * k * k + 0.5 * (1.0 - k) * (1.0 - k);
        let r = integrate(|t: f64| (t - k).abs(), unit(), 1e-10).unwrap();
        assert!((r.value - oracle).abs() <= 1e-10);
    }

    #[test]
    fn jump_at_breakpoint_is_exact() {
        let step = |t: f64| if t <= 0.4 { 1.0 } else { -2.0 };
        let r = integrate_with_breaks(step, 0.0, 1.0, &[0.4], 1e-12).unwrap();
        assert!((r.value - (0.4 - 1.2)).abs() < 1e-14);
        assert_eq!(r.subdivisions, 2);
    }

    #[test]
    fn empty_range_is_zero() {
        let r = integrate_with_breaks(|t| t, 0.5, 0.5, &[0.5], 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.subdivisions, 0);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(matches!(
            integrate(|t| t, unit(), 0.0),
            Err(Error::InvalidTolerance(_))
        ));
        assert!(matches!(
            integrate(|t| t, unit(), f64::NAN),
            Err(Error::InvalidTolerance(_))
        ));
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let r = integrate(|t: f64| 1.0 / (t - 0.5), unit(), 1e-10);
        assert!(r.is_err());
    }

    #[test]
    fn singular_integrand_fails_loudly() {
        // the left panel's estimate decays like h^0.01; bisection runs out of
        // representable midpoints (or the integrand overflows) long before
        let r = integrate(|t: f64| t.powf(-0.99), unit(), 1e-10);
        assert!(matches!(
            r,
            Err(Error::OracleNonConvergence { .. } | Error::NonFiniteIntegrand { .. })
        ));
    }

    #[test]
    fn sign_changes_finds_simple_roots() {
        let roots = sign_changes(|t| (t - 0.3) * (t - 0.71), 0.0, 1.0);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 0.3).abs() < 1e-12);
        assert!((roots[1] - 0.71).abs() < 1e-12);
    }

    #[test]
    fn sign_changes_skips_touching_zero() {
        let roots = sign_changes(|t| (t - 0.3) * (t - 0.3), 0.0, 1.0);
        assert!(roots.is_empty());
    }

    #[test]
    fn sign_changes_reports_sampled_zero() {
        let roots = sign_changes(|t| 6.0 * t - 3.0, 0.0, 1.0);
        assert_eq!(roots, vec![0.5]);
    }
}
