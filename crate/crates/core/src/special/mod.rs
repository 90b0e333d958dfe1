//! Real-argument special functions: Gamma, digamma, Riemann zeta, and the
//! Bessel family in [`bessel`].

pub mod bessel;

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ψ(1) = −γ.
pub const PSI_ONE: f64 = -EULER_GAMMA;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// sin(πx) with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if x == x.floor() {
        return 0.0;
    }
    let r = x.rem_euclid(2.0);
    if r <= 0.25 {
        (PI * r).sin()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).cos()
    } else if r <= 1.25 {
        (PI * (1.0 - r)).sin()
    } else if r <= 1.75 {
        -(PI * (r - 1.5)).cos()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

/// Γ(x) for real x. Returns NaN at the poles x ∈ {0, −1, −2, …}.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x == x.floor() && x <= 25.0 {
        // exact factorials
        return (1..x as u64).fold(1.0, |acc, k| acc * k as f64);
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    let t = z + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    // split the power to delay overflow for large arguments
    let p = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * p * (-t).exp() * p * a
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument");
    if x < 0.5 {
        return (PI / sin_pi(x)).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    let t = z + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// Digamma ψ(x) = Γ'(x)/Γ(x). NaN at the poles.
pub fn digamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.0 {
        // ψ(x) = ψ(1 − x) − π cot(πx)
        return digamma(1.0 - x) - PI * (PI * x).cos() / sin_pi(x);
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli tail B_{2k}/(2k x^{2k})
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    shift + x.ln() - 0.5 / x - series
}

/// Dirichlet eta η(s) = Σ (−1)^{k} (k+1)^{−s} by the Cohen–Villegas–Zagier
/// acceleration. Valid for s ≥ 0 (and beyond, with growing constants).
fn dirichlet_eta(s: f64) -> f64 {
    const N: usize = 40;
    let mut d = (3.0 + 8f64.sqrt()).powi(N as i32);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut sum = 0.0;
    for k in 0..N {
        c = b - c;
        sum += c * ((k + 1) as f64).powf(-s);
        let kf = k as f64;
        let n = N as f64;
        b *= (kf + n) * (kf - n) / ((kf + 0.5) * (kf + 1.0));
    }
    sum / d
}

/// Riemann zeta function ζ(s) for real s ≠ 1.
///
/// Alternating-series acceleration on s ≥ 0, the functional equation
/// Γ(s/2)ζ(s) = π^{s−1/2} Γ((1−s)/2) ζ(1−s) for s < 0.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::Pole(1.0));
    }
    if s >= 0.0 {
        if s > 60.0 {
            return Ok(1.0 + 2f64.powf(-s) + 3f64.powf(-s));
        }
        let denom = -((1.0 - s) * std::f64::consts::LN_2).exp_m1();
        return Ok(dirichlet_eta(s) / denom);
    }
    // trivial zeros
    if s == s.floor() && (s as i64) % 2 == 0 {
        return Ok(0.0);
    }
    let reflected = riemann_zeta(1.0 - s)?;
    Ok(PI.powf(s - 0.5) * gamma(0.5 * (1.0 - s)) * reflected / gamma(0.5 * s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn gamma_known_values() {
        assert_relative_eq!(gamma(0.5), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(1.5), 0.5 * PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(-0.5), -2.0 * PI.sqrt(), max_relative = 1e-14);
        assert_eq!(gamma(6.0), 120.0);
        assert_relative_eq!(gamma(0.1), 9.513_507_698_668_732, max_relative = 1e-13);
        assert_relative_eq!(gamma(30.5), 4.822_696_933_490_909_5e31, max_relative = 1e-12);
        assert!(gamma(-2.0).is_nan());
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.3, 1.7, 12.25, 40.0] {
            assert_relative_eq!(ln_gamma(x), gamma(x).ln(), max_relative = 1e-13);
        }
    }

    #[test]
    fn digamma_known_values() {
        assert_relative_eq!(digamma(1.0), PSI_ONE, max_relative = 1e-14);
        let psi_half = -EULER_GAMMA - 2.0 * std::f64::consts::LN_2;
        assert_relative_eq!(digamma(0.5), psi_half, max_relative = 1e-14);
        assert_relative_eq!(digamma(-0.5), psi_half + 2.0, max_relative = 1e-13);
    }

    #[test]
    fn zeta_classical_values() {
        assert_relative_eq!(riemann_zeta(2.0).unwrap(), PI * PI / 6.0, max_relative = 1e-14);
        assert_relative_eq!(riemann_zeta(4.0).unwrap(), PI.powi(4) / 90.0, max_relative = 1e-14);
        assert_relative_eq!(riemann_zeta(-1.0).unwrap(), -1.0 / 12.0, max_relative = 1e-13);
        assert_relative_eq!(riemann_zeta(0.0).unwrap(), -0.5, max_relative = 1e-14);
        assert_relative_eq!(riemann_zeta(3.0).unwrap(), 1.202_056_903_159_594_2, max_relative = 1e-14);
        assert_relative_eq!(riemann_zeta(0.5).unwrap(), -1.460_354_508_809_586_8, max_relative = 1e-13);
        assert_relative_eq!(riemann_zeta(-3.0).unwrap(), 1.0 / 120.0, max_relative = 1e-12);
        assert_eq!(riemann_zeta(-4.0).unwrap(), 0.0);
        assert!(matches!(riemann_zeta(1.0), Err(Error::Pole(_))));
    }

    #[test]
    fn zeta_large_negative_argument() {
        // ζ(−29) = −B_30/30, B_30 = 8615841276005/14322
        let expected = -(8_615_841_276_005.0 / 14_322.0) / 30.0;
        assert_relative_eq!(riemann_zeta(-29.0).unwrap(), expected, max_relative = 1e-12);
    }

    #[test]
    fn functional_equation() {
        for s in [0.3, 0.45, 2.5] {
            let lhs = gamma(s / 2.0) * riemann_zeta(s).unwrap();
            let rhs = PI.powf(s - 0.5) * gamma((1.0 - s) / 2.0) * riemann_zeta(1.0 - s).unwrap();
            assert_relative_eq!(lhs / rhs, 1.0, max_relative = 1e-12);
        }
    }

    /// Euler–Maclaurin evaluation of ζ(s), independent of the eta/reflection path.
    fn zeta_euler_maclaurin(s: f64) -> f64 {
        const B2J: [f64; 10] = [
            1.0 / 6.0,
            -1.0 / 30.0,
            1.0 / 42.0,
            -1.0 / 30.0,
            5.0 / 66.0,
            -691.0 / 2730.0,
            7.0 / 6.0,
            -3617.0 / 510.0,
            43867.0 / 798.0,
            -174611.0 / 330.0,
        ];
        let n = 60.0f64;
        let mut sum: f64 = (1..60).map(|k| (k as f64).powf(-s)).sum();
        sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
        let mut rising = s; // s(s+1)...(s+2j-2)
        let mut fact = 2.0; // (2j)!
        for (j, b) in B2J.iter().enumerate() {
            let j = j + 1;
            sum += b / fact * rising * n.powf(-s - 2.0 * j as f64 + 1.0);
            rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
            fact *= (2 * j + 1) as f64 * (2 * j + 2) as f64;
        }
        sum
    }

    #[test]
    fn zeta_negative_half() {
        assert_relative_eq!(riemann_zeta(-0.5).unwrap(), -0.207_886_224_977_354_6, max_relative = 1e-12);
    }

    #[test]
    fn zeta_negative_odd_integers_from_bernoulli() {
        // ζ(1 − 2k) = −B_{2k}/(2k)
        let bernoulli = [
            (1, 1.0 / 6.0),
            (2, -1.0 / 30.0),
            (3, 1.0 / 42.0),
            (5, 5.0 / 66.0),
            (6, -691.0 / 2730.0),
            (8, -3617.0 / 510.0),
            (10, -174_611.0 / 330.0),
            (13, 8_553_103.0 / 6.0),
        ];
        for (k, b) in bernoulli {
            let s = 1.0 - 2.0 * k as f64;
            assert_relative_eq!(riemann_zeta(s).unwrap(), -b / (2.0 * k as f64), max_relative = 1e-12);
        }
    }

    proptest! {
        #[test]
        fn zeta_matches_euler_maclaurin(s in -0.9f64..30.0) {
            prop_assume!((s - 1.0).abs() > 1e-3);
            let expected = zeta_euler_maclaurin(s);
            let got = riemann_zeta(s).unwrap();
            prop_assert!((got / expected - 1.0).abs() < 1e-10, "s = {s}: {got} vs {expected}");
        }
    }
}
