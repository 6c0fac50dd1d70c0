use crate::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value and error estimate of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    /// False when the interval budget ran out before the tolerance was met.
    pub converged: bool,
}

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Segment> {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                node: 0,
                message: format!("integrand is {v} at x = {x}"),
            })
        }
    };
    let fc = eval(mid)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = eval(mid - dx)? + eval(mid + dx)?;
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Ok(Segment {
        lo,
        hi,
        value: k * half,
        error: ((k - g) * half).abs(),
    })
}

/// Globally adaptive 15-point Gauss–Kronrod integration of `f` over `[lo, hi]`
/// until the error estimate is below `max(abs_tol, rel_tol * |value|)`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<AdaptiveResult> {
    const MAX_INTERVALS: usize = 20_000;
    let r = integrate_adaptive_budget(f, lo, hi, rel_tol, abs_tol, MAX_INTERVALS)?;
    if !r.converged {
        return Err(Error::NonConvergence {
            message: format!("adaptive quadrature on [{lo}, {hi}] (error estimate {:e})", r.error),
            best: r.value,
        });
    }
    Ok(r)
}

/// As [`integrate_adaptive`], but stops after `max_intervals` subintervals and
/// returns the current value and error estimate with `converged = false`.
pub fn integrate_adaptive_budget<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<AdaptiveResult> {
    if lo == hi {
        return Ok(AdaptiveResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
            converged: true,
        });
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(&f, lo, hi)?;
    let (mut value, mut error) = (first.value, first.error);
    heap.push(first);
    let mut converged = true;
    while error > abs_tol.max(rel_tol * value.abs()) {
        if heap.len() >= max_intervals.max(1) {
            converged = false;
            break;
        }
        let worst = heap.pop().expect("nonempty heap");
        let mid = 0.5 * (worst.lo + worst.hi);
        let left = kronrod(&f, worst.lo, mid)?;
        let right = kronrod(&f, mid, worst.hi)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if heap.len() % 64 == 0 {
            // re-sum to avoid drift from repeated updates
            value = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
        }
    }
    let intervals = heap.len();
    value = heap.iter().map(|s| s.value).sum();
    error = heap.iter().map(|s| s.error).sum();
    Ok(AdaptiveResult {
        value,
        error,
        intervals,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_and_singular_integrands() {
        let r = integrate_adaptive(|x: f64| x.exp(), 0.0, 1.0, 1e-13, 0.0).unwrap();
        assert!((r.value - (1f64.exp() - 1.0)).abs() < 1e-13);
        let r = integrate_adaptive(|x: f64| if x > 0.0 { x * x.ln() } else { 0.0 }, 0.0, 1.0, 1e-12, 0.0).unwrap();
        assert!((r.value + 0.25).abs() < 1e-12);
        let r = integrate_adaptive(|x: f64| x.sqrt(), 0.0, 1.0, 1e-12, 0.0).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn nan_is_an_evaluation_error() {
        let r = integrate_adaptive(|_| f64::NAN, 0.0, 1.0, 1e-8, 0.0);
        assert!(matches!(r, Err(Error::Evaluation { .. })));
    }
}
