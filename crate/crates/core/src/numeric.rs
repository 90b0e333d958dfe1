//! Small numerical kernels shared by the spectral modules: compensated
//! summation, adaptive Gauss–Kronrod quadrature and bracketed root refinement.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

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
// Gauss weights paired with XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let result = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (result, err)
}

#[derive(Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
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
        self.err.total_cmp(&other.err)
    }
}

/// A computed value with an error bound.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Estimate {
    pub value: f64,
    pub bound: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, bound: 0.0 }
    }
}

/// Result of an adaptive quadrature.
#[derive(Debug, Clone, Copy, Default)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

/// Globally adaptive 7/15-point Gauss–Kronrod quadrature on `[a, b]`.
///
/// Stops when the summed error estimate drops below
/// `max(abs_tol, rel_tol * |I|)` or the segment budget is spent; the
/// returned error is the final estimate either way. Segment values are
/// re-summed in left-to-right order so the result does not depend on the
/// order of refinement.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Quadrature {
    const MAX_SEGMENTS: usize = 4000;
    if a == b {
        return Quadrature { value: 0.0, error: 0.0 };
    }
    let mut heap = BinaryHeap::new();
    // A few initial panels so narrow features are not missed by one rule.
    let initial = 8;
    for k in 0..initial {
        let lo = a + (b - a) * k as f64 / initial as f64;
        let hi = a + (b - a) * (k + 1) as f64 / initial as f64;
        let (value, err) = gauss_kronrod_15(&f, lo, hi);
        heap.push(Segment { a: lo, b: hi, value, err });
    }
    let mut total: f64 = heap.iter().map(|s| s.value).sum();
    let mut err: f64 = heap.iter().map(|s| s.err).sum();
    loop {
        if err <= abs_tol.max(rel_tol * total.abs()) || heap.len() >= MAX_SEGMENTS {
            break;
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let (v1, e1) = gauss_kronrod_15(&f, worst.a, mid);
        let (v2, e2) = gauss_kronrod_15(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.err;
        heap.push(Segment { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, err: e2 });
    }
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = compensated_sum(segments.iter().map(|s| s.value));
    let error = segments.iter().map(|s| s.err).sum();
    Quadrature { value, error }
}

/// Integrates over `[a, b]` (0 < a < b) after the substitution `t = e^u`,
/// which suits integrands spread over several decades.
pub fn integrate_log<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Quadrature {
    debug_assert!(a > 0.0 && b > a);
    integrate(
        |u| {
            let t = u.exp();
            f(t) * t
        },
        a.ln(),
        b.ln(),
        abs_tol,
        rel_tol,
    )
}

/// Brent's method on a sign-changing bracket.
pub fn brent<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::RootFinding { lo, hi, reason: format!("no sign change (f = {fa:e}, {fb:e})") });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::RootFinding { lo, hi, reason: "non-finite function value".into() });
        }
    }
    Err(Error::RootFinding { lo, hi, reason: "iteration limit reached".into() })
}

/// Relative bracket width at which scanned roots are accepted.
pub const ROOT_REL_TOL: f64 = 1e-15;

/// All roots of `f` on `(start, end]`, located by scanning with spacing
/// `step` and refined by Brent's method. `step` must be below the minimal
/// root separation for completeness.
pub fn scan_roots<F: Fn(f64) -> f64>(f: F, start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    let mut roots = Vec::new();
    let mut x0 = start;
    let mut f0 = f(x0);
    while x0 < end {
        let x1 = (x0 + step).min(end);
        let f1 = f(x1);
        if f1 == 0.0 {
            roots.push(x1);
        } else if f0 != 0.0 && f0.signum() != f1.signum() {
            roots.push(brent(&f, x0, x1, ROOT_REL_TOL * x1.abs())?);
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(roots)
}

/// Upper incomplete gamma Γ(a, x) for a = k/2 with k ≥ 1 and x ≥ 0.
pub fn upper_gamma_half(twice_a: u32, x: f64) -> f64 {
    assert!(twice_a >= 1, "order must be positive");
    let (mut a, mut value) = if twice_a.is_multiple_of(2) {
        (1.0, (-x).exp())
    } else {
        (0.5, std::f64::consts::PI.sqrt() * libm::erfc(x.sqrt()))
    };
    let target = twice_a as f64 / 2.0;
    while a < target {
        value = a * value + x.powf(a) * (-x).exp();
        a += 1.0;
    }
    value
}
