//! Numerical integration used by the fallback paths and by the oracles.
//!
//! Double-exponential rules (tanh-sinh on finite intervals, exp-sinh on
//! half-lines) cope with integrable endpoint singularities; adaptive
//! Gauss–Kronrod handles interior kinks on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const DE_MAX_LEVEL: u32 = 9;

/// ∫_a^∞ f(x) dx with the substitution x = a + exp(π/2 sinh t).
pub fn exp_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, rel_tol: f64) -> Result<Quadrature> {
    const T_MAX: f64 = 6.5;
    let mut eval = |t: f64| -> f64 {
        let u = (FRAC_PI_2 * t.sinh()).exp();
        let w = FRAC_PI_2 * t.cosh() * u;
        let v = f(a + u) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    double_exponential(&mut eval, T_MAX, rel_tol, "exp_sinh")
}

/// ∫_a^b f(x) dx with the tanh-sinh substitution; `f` is never evaluated at
/// the endpoints. Abscissae near `a` are exact, so a singular endpoint is best
/// placed there.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0, evaluations: 0 });
    }
    const T_MAX: f64 = 6.0;
    let half = 0.5 * (b - a);
    let mut eval = |t: f64| -> f64 {
        let s = FRAC_PI_2 * t.sinh();
        // δ = 1 - tanh|s|, computed without cancellation
        let e = (-2.0 * s.abs()).exp();
        let delta = 2.0 * e / (1.0 + e);
        let sech2 = delta * (2.0 - delta);
        let x = if s >= 0.0 { b - half * delta } else { a + half * delta };
        if x <= a || x >= b {
            return 0.0;
        }
        let w = half * FRAC_PI_2 * t.cosh() * sech2;
        let v = f(x) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    double_exponential(&mut eval, T_MAX, rel_tol, "tanh_sinh")
}

fn double_exponential(
    eval: &mut dyn FnMut(f64) -> f64,
    t_max: f64,
    rel_tol: f64,
    name: &'static str,
) -> Result<Quadrature> {
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut evaluations = 1;
    let n0 = t_max.ceil() as i64;
    for k in 1..=n0 {
        let t = k as f64;
        sum += eval(t) + eval(-t);
        evaluations += 2;
    }
    let mut estimate = h * sum;
    for level in 1..=DE_MAX_LEVEL {
        h *= 0.5;
        let n = (t_max / h).ceil() as i64;
        let mut k = 1;
        while k <= n {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            evaluations += 2;
            k += 2;
        }
        let next = h * sum;
        let err = (next - estimate).abs();
        estimate = next;
        if level >= 3 && err <= rel_tol * estimate.abs() {
            return Ok(Quadrature { value: estimate, error: err, evaluations });
        }
        if level >= 3 && estimate == 0.0 && err == 0.0 {
            return Ok(Quadrature { value: 0.0, error: 0.0, evaluations });
        }
    }
    Err(Error::accuracy(name, format!("no convergence after {evaluations} evaluations, value {estimate}")))
}

// 15-point Kronrod extension of the 7-point Gauss rule.
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

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Fixed 7-point Gauss–Legendre rule on [a, b].
pub fn gauss_legendre7<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = WG[3] * f(c);
    for j in 0..3 {
        let dx = h * XGK[2 * j + 1];
        sum += WG[j] * (f(c - dx) + f(c + dx));
    }
    sum * h
}

struct Segment {
    a: f64,
    b: f64,
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

/// Globally adaptive Gauss–Kronrod (7/15) on a finite interval.
pub fn gauss_kronrod<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quadrature> {
    const MAX_SEGMENTS: usize = 4000;
    let (value, error) = kronrod15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut evaluations = 15;
    while total_err > abs_tol.max(rel_tol * total.abs()) {
        if heap.len() >= MAX_SEGMENTS || !total.is_finite() {
            return Err(Error::accuracy(
                "gauss_kronrod",
                format!("error {total_err:e} on value {total:e} after {evaluations} evaluations"),
            ));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = kronrod15(&mut f, worst.a, mid);
        let (v2, e2) = kronrod15(&mut f, mid, worst.b);
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // Re-sum to shed drift from the running updates.
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let error: f64 = heap.iter().map(|s| s.error).sum();
    Ok(Quadrature { value, error, evaluations })
}
