//! Finite-temperature free energy of one region: the thermal mode sum, the
//! exponential cut-off, the Matsubara zeta function in its two forms, the
//! zeta-regularized free energy and its high-temperature expansion.
//!
//! ω and T share the same inverse-length unit.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hk_coeff::CoefficientSet;
use crate::numeric::{compensated_sum, upper_gamma_half, Estimate};
use crate::special::bessel::{bessel_k, bessel_k_scaled};
use crate::special::{gamma, riemann_zeta, PSI_ONE};
use crate::spectrum::ModeList;
use crate::zeta::{power_tail, MeromorphicValue, ZetaData};

/// How the normalization enters the free energy: ln(μ̃²) multiplies ζ_T(0).
pub const LOG_CONVENTION: &str = "ln(mu_tilde^2), mu_tilde = 2 mu / e";

/// μ̃ = 2μ/e.
pub fn mu_tilde(mu: f64) -> f64 {
    2.0 * mu / std::f64::consts::E
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::Numerical(format!("normalization scale must be positive, got {mu}")))
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Numerical(format!("temperature must be nonnegative, got {t}")))
    }
}

fn insufficient(reason: String) -> Error {
    Error::InsufficientSpectrum { reason }
}

/// T Σ ln(1 − e^{−ω/T}), exactly 0 at T = 0.
pub fn thermal_correction(m: &ModeList, temperature: f64) -> Result<Estimate> {
    check_temperature(temperature)?;
    if temperature == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let x_max = m.omega_max / temperature;
    let bound = match m.tail {
        None => 0.0,
        Some(tail) => {
            if x_max < 20.0 {
                return Err(insufficient(format!(
                    "omega_max/T = {x_max:.3} < 20; the thermal tail is not negligible"
                )));
            }
            // |T ln(1 − e^{−ω/T})| ≤ T e^{−ω/T}/(1 − e^{−Ω/T}) above Ω
            let q = -(-x_max).exp_m1();
            tail.tail_bound(|k| temperature.powi(k as i32 + 1) * upper_gamma_half(2 * k + 2, x_max) / q)
        }
    };
    let sum = compensated_sum(
        m.modes.iter().map(|md| md.multiplicity as f64 * (-(-md.omega / temperature).exp()).ln_1p()),
    );
    Ok(Estimate { value: temperature * sum, bound })
}

/// ½ Σ ω e^{−λω}.
pub fn cutoff_energy(m: &ModeList, lambda: f64) -> Result<Estimate> {
    if !(lambda > 0.0) {
        return Err(Error::Numerical(format!("cut-off parameter must be positive, got {lambda}")));
    }
    let x_max = lambda * m.omega_max;
    let bound = match m.tail {
        None => 0.0,
        Some(tail) => {
            if x_max < 30.0 {
                return Err(insufficient(format!("lambda·omega_max = {x_max:.3} < 30")));
            }
            tail.tail_bound(|k| 0.5 * lambda.powi(-(k as i32) - 1) * upper_gamma_half(2 * k + 4, x_max))
        }
    };
    let sum = compensated_sum(m.modes.iter().map(|md| md.multiplicity as f64 * md.omega * (-lambda * md.omega).exp()));
    Ok(Estimate { value: 0.5 * sum, bound })
}

/// The λ-dependent part of the cut-off energy: coefficients of λ^{n−D−1}
/// for n < D and of ln λ.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Divergences {
    pub dim: usize,
    pub powers: BTreeMap<usize, f64>,
    pub log_lambda: f64,
    /// c_{D+1}, which also multiplies (ψ(1) − ln μ)
    pub c_d_plus_one: f64,
}

impl Divergences {
    pub fn from_coefficients(coeffs: &CoefficientSet) -> Result<Self> {
        let d = coeffs.dim;
        let mut powers = BTreeMap::new();
        for n in 0..d {
            let g = gamma((d + 1 - n) as f64) / gamma(0.5 * (d - n) as f64);
            powers.insert(n, g * coeffs.value(n)?);
        }
        let c = coeffs.value(d + 1)?;
        Ok(Self { dim: d, powers, log_lambda: c / (2.0 * PI.sqrt()), c_d_plus_one: c })
    }

    /// Σ_n (coefficient) λ^{n−D−1} − (ψ(1) − ln λμ) c_{D+1}/(2√π).
    pub fn evaluate(&self, lambda: f64, mu: f64) -> f64 {
        let d = self.dim as i32;
        let powers: f64 = self.powers.iter().map(|(&n, &a)| a * lambda.powi(n as i32 - d - 1)).sum();
        powers - (PSI_ONE - (lambda * mu).ln()) * self.c_d_plus_one / (2.0 * PI.sqrt())
    }
}

/// The small-λ form of the cut-off energy with the o(λ) part dropped.
pub fn cutoff_expansion(coeffs: &CoefficientSet, e_reg: f64, lambda: f64, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok(Divergences::from_coefficients(coeffs)?.evaluate(lambda, mu) + e_reg)
}

/// Σ_{ω,l} (ω² + (2πlT)²)^{−s} summed over l per mode, with an
/// Euler–Maclaurin tail in l and a Weyl tail over the modes.
pub fn thermal_zeta_direct(m: &ModeList, temperature: f64, s: f64) -> Result<Estimate> {
    if !(temperature > 0.0) {
        return Err(Error::Numerical(format!("thermal zeta needs T > 0, got {temperature}")));
    }
    let abscissa = 0.5 * (m.dim as f64 + 1.0);
    if s <= abscissa {
        return Err(Error::DivergenceMargin { s, abscissa });
    }
    let a = 2.0 * PI * temperature;
    let per_mode: Vec<(f64, f64)> = m
        .modes
        .par_iter()
        .map(|md| {
            let (v, b) = matsubara_sum(md.omega, a, s);
            (md.multiplicity as f64 * v, md.multiplicity as f64 * b)
        })
        .collect();
    let mut value = compensated_sum(per_mode.iter().map(|p| p.0));
    let mut bound: f64 = per_mode.iter().map(|p| p.1).sum();
    if m.tail.is_some() {
        if m.omega_max < 40.0 * temperature {
            return Err(insufficient(format!("omega_max = {} below 40·T", m.omega_max)));
        }
        // for ω ≫ T the l-sum equals √π Γ(s−½)/(aΓ(s)) ω^{1−2s} up to e^{−ω/T}
        let c = PI.sqrt() * gamma(s - 0.5) / (a * gamma(s));
        let (corr, env) = power_tail(m, s - 0.5).expect("tail model present");
        value += c * corr;
        bound += c * (env + corr.abs());
    }
    Ok(Estimate { value, bound })
}

/// Σ_l (ω² + a²l²)^{−s} over all integers l.
fn matsubara_sum(omega: f64, a: f64, s: f64) -> (f64, f64) {
    let f = |l: f64| (omega * omega + a * a * l * l).powf(-s);
    let cut = (2.0 * omega / a).ceil() + 100.0;
    let explicit = compensated_sum((1..=cut as u64).map(|l| f(l as f64)));
    // Σ_{l>L} f = ∫_L^∞ f − f(L)/2 − f′(L)/12 + f‴(L)/720 − …; with
    // u = ω/(aL) ≤ 1/2 the integral is a binomial series in u²
    let u2 = (omega / (a * cut)).powi(2);
    let mut integral = 0.0;
    let mut binom = 1.0;
    for k in 0..200 {
        let term = binom * u2.powi(k) / (2.0 * s + 2.0 * k as f64 - 1.0);
        integral += term;
        if term.abs() < 1e-18 * integral.abs() {
            break;
        }
        binom *= (-s - k as f64) / (k as f64 + 1.0);
    }
    integral *= a.powf(-2.0 * s) * cut.powf(1.0 - 2.0 * s);
    let d1 = -2.0 * s * a * a * cut * (omega * omega + a * a * cut * cut).powf(-s - 1.0);
    // higher derivatives from the leading power (aL)^{−2s}
    let lead = (a * cut).powf(-2.0 * s);
    let d3 = -2.0 * s * (2.0 * s + 1.0) * (2.0 * s + 2.0) * lead / cut.powi(3);
    let d5 = -2.0 * s * (2.0 * s + 1.0) * (2.0 * s + 2.0) * (2.0 * s + 3.0) * (2.0 * s + 4.0) * lead / cut.powi(5);
    let tail = integral - 0.5 * f(cut) - d1 / 12.0 + d3 / 720.0;
    let value = omega.powf(-2.0 * s) + 2.0 * (explicit + tail);
    let bound = 2.0 * (d5 / 30240.0).abs() + 1e-16 * value;
    (value, bound)
}

/// Arguments of K at or beyond this are dropped.
const BESSEL_CUT: f64 = 40.0;

/// The Bessel form of ζ_T(s):
/// Γ(s−½)/Γ(s)·ζ(s−½)/(2√πT) + 2/(√πTΓ(s)) Σ_{ω,l≥1} (l/(2Tω))^{s−½} K_{s−½}(lω/T).
pub fn thermal_zeta_bessel(m: &ModeList, temperature: f64, s: f64, zeta_at_shift: &MeromorphicValue) -> Result<Estimate> {
    if !(temperature > 0.0) {
        return Err(Error::Numerical(format!("thermal zeta needs T > 0, got {temperature}")));
    }
    let nu = s - 0.5;
    if (zeta_at_shift.s - nu).abs() > 1e-12 {
        return Err(Error::Numerical(format!("zeta supplied at {} but needed at {nu}", zeta_at_shift.s)));
    }
    if zeta_at_shift.res != 0.0 || (nu <= 0.0 && nu == nu.round()) {
        return Err(Error::Pole(nu));
    }
    if !(s > 0.0) {
        return Err(Error::Unsupported(format!("Bessel form implemented for s > 0, got {s}")));
    }
    let g = gamma(s);
    let first = gamma(nu) / g / (2.0 * PI.sqrt() * temperature);
    let pref = 2.0 / (PI.sqrt() * temperature * g);
    let (bessel, bound) = bessel_mode_sum(m, temperature, nu)?;
    Ok(Estimate { value: first * zeta_at_shift.fp + pref * bessel, bound: pref * bound + first.abs() * zeta_at_shift.bound })
}

/// Σ_ω Σ_{l≥1} (l/(2Tω))^ν K_ν(lω/T) with a bound for the dropped terms.
fn bessel_mode_sum(m: &ModeList, temperature: f64, nu: f64) -> Result<(f64, f64)> {
    let per_mode: Vec<(f64, f64)> = m
        .modes
        .par_iter()
        .map(|md| {
            let x1 = md.omega / temperature;
            let term = |l: f64| (l / (2.0 * temperature * md.omega)).powf(nu) * bessel_k(nu, l * x1);
            let mut sum = 0.0;
            let mut l = 1.0;
            while l * x1 < BESSEL_CUT {
                sum += term(l);
                l += 1.0;
            }
            // K_ν(lx)·l^ν falls at least as fast as e^{−lx} once lx ≥ 40
            let dropped = term(l) / -(-x1).exp_m1();
            (md.multiplicity as f64 * sum, md.multiplicity as f64 * dropped)
        })
        .collect();
    let sum = compensated_sum(per_mode.iter().map(|p| p.0));
    let mut bound: f64 = per_mode.iter().map(|p| p.1).sum();
    if let Some(tail) = m.tail {
        let x_max = m.omega_max / temperature;
        if x_max < BESSEL_CUT {
            return Err(insufficient(format!("omega_max = {} below 40·T", m.omega_max)));
        }
        // above Ω the l = 1 term, relative to e^{−ω/T}, decreases in ω
        let c = (2.0 * temperature * m.omega_max).powf(-nu) * bessel_k_scaled(nu, x_max) / -(-x_max).exp_m1();
        bound += c * tail.tail_bound(|k| temperature.powi(k as i32) * upper_gamma_half(2 * k + 2, x_max));
    }
    Ok((sum, bound))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThermalZetaAtZero {
    pub value0: Estimate,
    pub deriv0: Estimate,
}

/// ζ_T(0) = −Res/T and
/// ζ_T′(0) = −(FP + (2 − 2 ln 2) Res)/T + (2/(√πT)) Σ_{ω,l} (l/(2Tω))^{−½} K_{−½}(lω/T),
/// with FP and Res taken at s = −½. The Bessel sum equals −2 Σ ln(1 − e^{−ω/T})
/// but is evaluated from K directly, so it does not share code with the mode sum.
pub fn thermal_zeta_at_zero(m: &ModeList, zd: &ZetaData, temperature: f64) -> Result<ThermalZetaAtZero> {
    if !(temperature > 0.0) {
        return Err(Error::Numerical(format!("thermal zeta needs T > 0, got {temperature}")));
    }
    let z = &zd.at_minus_half;
    let (bessel, bessel_bound) = bessel_mode_sum(m, temperature, -0.5)?;
    let pref = 2.0 / (PI.sqrt() * temperature);
    let w = 2.0 - 2.0 * LN_2;
    Ok(ThermalZetaAtZero {
        value0: Estimate { value: -z.res / temperature, bound: z.res_bound / temperature },
        deriv0: Estimate {
            value: -(z.fp + w * z.res) / temperature + pref * bessel,
            // relative error of the quadrature for K
            bound: (z.bound + w * z.res_bound) / temperature + pref * (bessel_bound + 1e-13 * bessel.abs()),
        },
    })
}

/// ½(FP + ln(μ²) Res) at s = −½.
pub fn regularized_zero_t(zd: &ZetaData, mu: f64) -> Result<Estimate> {
    check_mu(mu)?;
    let z = &zd.at_minus_half;
    let l = (mu * mu).ln();
    Ok(Estimate { value: 0.5 * (z.fp + l * z.res), bound: 0.5 * (z.bound + l.abs() * z.res_bound) })
}

/// −(T/2)(ζ_T′(0) + ln(μ̃²) ζ_T(0)); at T = 0 the zero-temperature value.
pub fn regularized_free_energy(m: &ModeList, zd: &ZetaData, temperature: f64, mu: f64) -> Result<Estimate> {
    check_mu(mu)?;
    check_temperature(temperature)?;
    if temperature == 0.0 {
        return regularized_zero_t(zd, mu);
    }
    let tz = thermal_zeta_at_zero(m, zd, temperature)?;
    let l = mu_tilde(mu).powi(2).ln();
    Ok(Estimate {
        value: -0.5 * temperature * (tz.deriv0.value + l * tz.value0.value),
        bound: 0.5 * temperature * (tz.deriv0.bound + l.abs() * tz.value0.bound),
    })
}

/// One term coefficient · T^power · (ln T if `log`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticTerm {
    pub power: i32,
    pub log: bool,
    pub coefficient: f64,
    pub bound: f64,
}

impl AsymptoticTerm {
    pub fn value(&self, temperature: f64) -> f64 {
        let base = self.coefficient * temperature.powi(self.power);
        if self.log {
            base * temperature.ln()
        } else {
            base
        }
    }
}

impl fmt::Display for AsymptoticTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pow = match self.power {
            0 => String::new(),
            1 => "T".to_string(),
            p => format!("T^{p}"),
        };
        match (pow.is_empty(), self.log) {
            (true, true) => write!(f, "ln T"),
            (true, false) => write!(f, "1"),
            (false, true) => write!(f, "{pow} ln T"),
            (false, false) => write!(f, "{pow}"),
        }
    }
}

/// Terms of the high-temperature series built from coefficient lists:
/// powers T^{D+1}..T² from c_0..c_{D−1}, the T ln T and T terms from
/// `zeta0`/`zeta_prime0` (= c_D and the ζ′(0) analogue), the ln T and constant
/// terms from `res` (= −c_{D+1}/(2√π)), and T^{D+1−n} for D+2 ≤ n ≤ n_max.
pub(crate) fn series_terms(
    c: impl Fn(usize) -> Result<Estimate>,
    dim: usize,
    zeta0: Estimate,
    zeta_prime0: Estimate,
    res: Estimate,
    mu: f64,
    n_max: usize,
) -> Result<Vec<AsymptoticTerm>> {
    check_mu(mu)?;
    let d = dim as i32;
    let mut terms = Vec::new();
    for n in 0..dim {
        let k = (d - n as i32 + 1) as f64;
        let f = -2f64.powi(d - n as i32) * gamma(0.5 * k) * riemann_zeta(k)? / PI.sqrt();
        let cn = c(n)?;
        terms.push(AsymptoticTerm { power: d - n as i32 + 1, log: false, coefficient: f * cn.value, bound: f.abs() * cn.bound });
    }
    terms.push(AsymptoticTerm { power: 1, log: true, coefficient: -zeta0.value, bound: zeta0.bound });
    terms.push(AsymptoticTerm { power: 1, log: false, coefficient: -0.5 * zeta_prime0.value, bound: 0.5 * zeta_prime0.bound });
    let k0 = 1.0 + PSI_ONE + (2.0 * PI).ln() - mu.ln();
    terms.push(AsymptoticTerm { power: 0, log: true, coefficient: -res.value, bound: res.bound });
    terms.push(AsymptoticTerm { power: 0, log: false, coefficient: -k0 * res.value, bound: k0.abs() * res.bound });
    for n in dim + 2..=n_max {
        let k = (n - dim) as f64;
        let f = -(2.0 * PI).powf(-k) * gamma(0.5 * k) * riemann_zeta(k)?;
        let cn = c(n)?;
        terms.push(AsymptoticTerm { power: d + 1 - n as i32, log: false, coefficient: f * cn.value, bound: f.abs() * cn.bound });
    }
    Ok(terms)
}

/// The high-temperature series of the regularized free energy up to c_{n_max}.
pub fn high_t_expansion(coeffs: &CoefficientSet, zd: &ZetaData, mu: f64, n_max: usize) -> Result<Vec<AsymptoticTerm>> {
    let z = &zd.at_minus_half;
    series_terms(
        |n| coeffs.get(n).map(|c| Estimate { value: c.value, bound: c.uncertainty }),
        coeffs.dim,
        zd.zeta_zero,
        zd.zeta_prime_zero,
        Estimate { value: z.res, bound: z.res_bound },
        mu,
        n_max,
    )
}

pub fn evaluate_terms(terms: &[AsymptoticTerm], temperature: f64) -> Estimate {
    Estimate {
        value: compensated_sum(terms.iter().map(|t| t.value(temperature))),
        bound: terms.iter().map(|t| (t.bound * t.value(temperature) / t.coefficient).abs()).filter(|b| b.is_finite()).sum(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HighTCheck {
    pub exact: Estimate,
    pub expansion: Estimate,
    pub residual: f64,
}

/// Regularized free energy from the spectrum against the truncated series.
pub fn high_t_check(m: &ModeList, coeffs: &CoefficientSet, zd: &ZetaData, temperature: f64, mu: f64) -> Result<HighTCheck> {
    let n_max = coeffs.contiguous_order().ok_or(Error::Coverage(0))?;
    let exact = regularized_free_energy(m, zd, temperature, mu)?;
    let expansion = evaluate_terms(&high_t_expansion(coeffs, zd, mu, n_max)?, temperature);
    Ok(HighTCheck { exact, expansion, residual: exact.value - expansion.value })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FreeEnergyReport {
    pub temperature: f64,
    pub mu: f64,
    pub log_convention: &'static str,
    pub zero_t_regularized: Estimate,
    pub thermal_correction: Estimate,
    pub regularized_total: Estimate,
    pub divergent_coefficients: Option<Divergences>,
    pub asymptotic_terms: Vec<AsymptoticTerm>,
    /// Sum of all bounds attached to regularized_total.
    pub residual_bound: f64,
}

/// Everything known about one region at one temperature.
pub fn free_energy_report(m: &ModeList, zd: &ZetaData, temperature: f64, mu: f64) -> Result<FreeEnergyReport> {
    let coeffs = &zd.coefficients;
    let zero = regularized_zero_t(zd, mu)?;
    let thermal = thermal_correction(m, temperature)?;
    let total = regularized_free_energy(m, zd, temperature, mu)?;
    let divergent = Divergences::from_coefficients(coeffs).ok();
    let n_max = coeffs.contiguous_order().unwrap_or(0);
    let asymptotic_terms = high_t_expansion(coeffs, zd, mu, n_max.max(coeffs.dim + 1)).unwrap_or_default();
    Ok(FreeEnergyReport {
        temperature,
        mu,
        log_convention: LOG_CONVENTION,
        zero_t_regularized: zero,
        thermal_correction: thermal,
        regularized_total: total,
        divergent_coefficients: divergent,
        asymptotic_terms,
        residual_bound: total.bound,
    })
}
