//! Bessel functions of real order and real positive argument.
//!
//! J and Y come from Steed's continued-fraction method with Temme's series
//! for small arguments. K is evaluated by trapezoidal quadrature of
//! ∫₀^∞ e^{−x cosh t} cosh(νt) dt, which converges geometrically in the step.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::scan_roots;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 100_000;
const RESCALE: f64 = 1e250;

/// Taylor coefficients of 1/Γ(z) = Σ_k C_k z^k, k = 1..26.
const RGAM: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

/// Temme's auxiliary functions for |x| ≤ 1/2:
/// gam1 = (1/Γ(1−x) − 1/Γ(1+x))/(2x), gam2 = (1/Γ(1−x) + 1/Γ(1+x))/2,
/// together with 1/Γ(1+x) and 1/Γ(1−x).
fn temme_gammas(x: f64) -> (f64, f64, f64, f64) {
    let mut gam1 = 0.0;
    let mut gam2 = 0.0;
    // Horner in x² over the even and odd coefficients
    for k in (2..=RGAM.len()).rev().step_by(2) {
        gam1 = gam1 * x * x - RGAM[k - 1];
    }
    for k in (1..=RGAM.len() - 1).rev().step_by(2) {
        gam2 = gam2 * x * x + RGAM[k - 1];
    }
    (gam1, gam2, gam2 - x * gam1, gam2 + x * gam1)
}

/// Values J_ν(x), Y_ν(x) and their derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselJY {
    pub j: f64,
    pub y: f64,
    pub jp: f64,
    pub yp: f64,
}

/// J_ν, Y_ν, J_ν′, Y_ν′ for ν ≥ 0 and x > 0.
pub fn bessel_jy(nu: f64, x: f64) -> BesselJY {
    assert!(nu >= 0.0 && x > 0.0, "bessel_jy needs nu >= 0 and x > 0");
    let nl = if x < 2.0 { (nu + 0.5) as i64 } else { ((nu - x + 1.5) as i64).max(0) };
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: J'_ν/J_ν by modified Lentz
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            break;
        }
    }

    // downward recurrence to order xmu
    let mut rjl = isign * 1e-30;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut rjp1 = rjpl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > RESCALE {
            rjl /= RESCALE;
            rjpl /= RESCALE;
            rjl1 /= RESCALE;
            rjp1 /= RESCALE;
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, rymu, ry1) = if x < 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let e = e.exp();
        let mut p = e / (gampl * PI);
        let mut q = 1.0 / (e * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS { 1.0 } else { pimu2.sin() / pimu2 };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let d = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                break;
            }
        }
        let rymu = -sum;
        let ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        (w / (rymup - f * rymu), rymu, ry1)
    } else {
        // CF2: p + iq by Steed's algorithm
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        for i in 1..MAXIT {
            a += 2.0 * i as f64;
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            let fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            let temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                break;
            }
        }
        let gam = (p - f) / q;
        let rjmu = (w / ((p - f) * gam + q)).sqrt().copysign(rjl);
        let rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        (rjmu, rymu, xmu * xi * rymu - rymup)
    };

    let fact = rjmu / rjl;
    let j = rjl1 * fact;
    let jp = rjp1 * fact;
    let (mut ymu, mut y1) = (rymu, ry1);
    for i in 1..=nl {
        let ytemp = (xmu + i as f64) * xi2 * y1 - ymu;
        ymu = y1;
        y1 = ytemp;
    }
    BesselJY { j, y: ymu, jp, yp: nu * xi * ymu - y1 }
}

pub fn bessel_j(nu: f64, x: f64) -> f64 {
    bessel_jy(nu, x).j
}

pub fn bessel_y(nu: f64, x: f64) -> f64 {
    bessel_jy(nu, x).y
}

/// Modified Bessel function K_ν(x) for real ν and x > 0.
pub fn bessel_k(nu: f64, x: f64) -> f64 {
    assert!(x > 0.0, "bessel_k needs x > 0");
    (-x).exp() * bessel_k_scaled(nu, x)
}

/// e^x K_ν(x).
pub fn bessel_k_scaled(nu: f64, x: f64) -> f64 {
    let nu = nu.abs();
    let h = 0.1f64.min(0.5 / x.sqrt());
    // log of the integrand e^{−x(cosh t − 1)} cosh(νt)
    let log_term = |t: f64| {
        let ln_cosh = nu * t + (0.5 * (1.0 + (-2.0 * nu * t).exp())).ln();
        -x * (t.cosh() - 1.0) + ln_cosh
    };
    // the integrand peaks where x sinh t = ν
    let t_peak = (nu / x).asinh();
    let mut sum = 0.5 * log_term(0.0).exp();
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let term = log_term(t).exp();
        sum += term;
        if t > t_peak && term < 1e-18 * sum {
            break;
        }
        k += 1;
    }
    h * sum
}

/// The k-th positive zero of J_ν.
pub fn bessel_zero(nu: f64, k: usize) -> Result<f64> {
    if nu < 0.0 || k == 0 {
        return Err(Error::Unsupported(format!("bessel_zero(nu = {nu}, k = {k})")));
    }
    // j_{ν,1} > ν and consecutive zeros are less than π + 1 apart
    let start = nu.max(1e-3);
    let end = start + (k as f64 + 1.0) * (PI + 1.0) + 2.0 * nu.cbrt() + 2.0;
    let roots = scan_roots(|z| bessel_j(nu, z), start, end, 0.25)?;
    roots.get(k - 1).copied().ok_or_else(|| Error::RootFinding {
        lo: start,
        hi: end,
        reason: format!("found only {} zeros", roots.len()),
    })
}
