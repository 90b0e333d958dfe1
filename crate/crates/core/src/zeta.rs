//! Spectral zeta functions ζ(s) = Σ ω^{−2s}: direct sums in the convergent
//! half-plane and the meromorphic continuation built from the heat trace.
//!
//! The continuation uses
//!
//! Γ(s)ζ(s) = ∫₀¹ t^{s−1}[K(t) − Σ_{n≤N} c_n t^{(n−D)/2}] dt
//!          + Σ_{n≤N} c_n/(s − (D−n)/2) + ∫₁^∞ t^{s−1} K(t) dt.
//!
//! The first integral is evaluated on [t_low, 1], where t_low is the smallest
//! time at which the truncated spectrum still reproduces K(t); the piece
//! below t_low is of order c_{N+1} and enters the error bound.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heatkernel::{minimal_usable_t, partial_trace};
use crate::hk_coeff::CoefficientSet;
use crate::numeric::{compensated_sum, integrate_log, CompensatedSum, Estimate};
use crate::special::{digamma, EULER_GAMMA};
use crate::spectrum::{heat_tail_bound, ModeList};

pub use crate::special::{gamma, riemann_zeta};

/// Relative target of the Mellin quadratures.
const QUAD_REL_TOL: f64 = 1e-12;
/// Truncation target used to choose t_low.
const TRACE_TOL: f64 = 1e-12;
/// The direct sum refuses when the tail bound exceeds this fraction of the sum.
const DIRECT_TAIL_LIMIT: f64 = 0.1;

/// Finite part and residue of ζ at s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MeromorphicValue {
    pub s: f64,
    pub fp: f64,
    pub res: f64,
    /// Error bound on fp.
    pub bound: f64,
    pub res_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ZetaData {
    pub zeta_zero: Estimate,
    pub zeta_prime_zero: Estimate,
    pub at_minus_half: MeromorphicValue,
    pub coefficients: CoefficientSet,
}

/// Σ ω^{−2s} over the listed modes plus the Weyl estimate of the tail.
///
/// The bound is the envelope estimate of the tail plus the magnitude of the
/// applied correction.
pub fn spectral_zeta_direct(m: &ModeList, s: f64) -> Result<Estimate> {
    let abscissa = 0.5 * m.dim as f64;
    if s <= abscissa {
        return Err(Error::DivergenceMargin { s, abscissa });
    }
    let partial = compensated_sum(m.modes.iter().map(|md| md.multiplicity as f64 * md.omega.powf(-2.0 * s)));
    let Some((correction, envelope)) = power_tail(m, s) else {
        return Ok(Estimate::exact(partial));
    };
    let value = partial + correction;
    if envelope > DIRECT_TAIL_LIMIT * value.abs() {
        return Err(Error::DivergenceMargin { s, abscissa });
    }
    Ok(Estimate { value, bound: envelope + correction.abs() })
}

/// Weyl estimate and envelope bound of Σ_{ω > omega_max} ω^{−2σ}, for σ > D/2.
/// None when the list has no tail model.
pub(crate) fn power_tail(m: &ModeList, sigma: f64) -> Option<(f64, f64)> {
    let tail = m.tail?;
    let big = m.omega_max;
    let d = m.dim as f64;
    let smooth = [(d, tail.c0 / gamma(0.5 * d + 1.0)), (d - 1.0, tail.c1 / gamma(0.5 * (d + 1.0)))];
    let correction: f64 = smooth
        .iter()
        .filter(|(k, _)| *k > 0.0)
        .map(|&(k, b)| b * k * big.powf(k - 2.0 * sigma) / (2.0 * sigma - k))
        .sum();
    let envelope = tail.tail_bound(|k| 2.0 * sigma * big.powf(k as f64 - 2.0 * sigma) / (2.0 * sigma - k as f64));
    Some((correction, envelope))
}

struct Split {
    t_low: f64,
    order: usize,
    /// ∫_{t_low}^1 t^{s−1}[K − Σ c_n t^{(n−D)/2}] + ∫_1^∞ t^{s−1}K
    integral: f64,
    bound: f64,
}

fn exponent(dim: usize, n: usize) -> f64 {
    0.5 * (dim as f64 - n as f64)
}

fn check_order(m: &ModeList, coeffs: &CoefficientSet, s: f64) -> Result<usize> {
    if coeffs.dim != m.dim {
        return Err(Error::Unsupported(format!(
            "coefficient set for D = {} used with a D = {} spectrum",
            coeffs.dim, m.dim
        )));
    }
    // the remainder after c_N is O(t^{(N+1−D)/2}); integrable iff N > D − 2s
    let needed = ((m.dim as f64 - 2.0 * s).floor() + 1.0).max(0.0) as usize;
    match coeffs.contiguous_order() {
        Some(n) if n >= needed => Ok(n),
        have => Err(Error::ContinuationOrder { needed, have: have.unwrap_or(0) }),
    }
}

fn lower_cut(m: &ModeList) -> Result<f64> {
    let t = minimal_usable_t(m, TRACE_TOL)?.max(1e-6);
    if t >= 0.5 {
        return Err(Error::InsufficientSpectrum {
            reason: format!("heat trace only usable for t ≥ {t:.3e}; the continuation needs t well below 1"),
        });
    }
    Ok(t)
}

fn asymptotic(coeffs: &CoefficientSet, order: usize, dim: usize, t: f64) -> f64 {
    compensated_sum((0..=order).map(|n| coeffs.values[&n].value * t.powf(-exponent(dim, n))))
}

fn split(m: &ModeList, coeffs: &CoefficientSet, order: usize, s: f64) -> Result<Split> {
    let t_low = lower_cut(m)?;
    let d = m.dim;
    // K(t) carries relative rounding, so the subtracted integrand has a noise
    // floor near t_low that the quadrature cannot resolve
    let noise = 1e-15 * partial_trace(m, t_low) * t_low.powf(s);
    let near = integrate_log(
        |t| t.powf(s - 1.0) * (partial_trace(m, t) - asymptotic(coeffs, order, d, t)),
        t_low,
        1.0,
        10.0 * noise,
        QUAD_REL_TOL,
    );
    let far = match m.omega_min() {
        None => Default::default(),
        Some(w) => {
            let t_end = 1.0 + (60.0 + 2.0 * s.abs()) / (w * w);
            integrate_log(|t| t.powf(s - 1.0) * partial_trace(m, t), 1.0, t_end, 1e-300, QUAD_REL_TOL)
        }
    };
    let truncation = if m.tail.is_some() {
        integrate_log(|t| t.powf(s - 1.0) * heat_tail_bound(m, t).unwrap_or(f64::INFINITY), t_low, 1.0, 1e-300, 1e-3)
            .value
    } else {
        0.0
    };
    // the part of ∫₀^{t_low} not captured by c_0..c_N, modelled on the
    // remainder at t_low and its leading power
    let rem = partial_trace(m, t_low) - asymptotic(coeffs, order, d, t_low);
    let below = rem.abs() * t_low.powf(s) / (s - exponent(d, order + 1));
    Ok(Split {
        t_low,
        order,
        integral: near.value + far.value,
        bound: near.error + far.error + truncation + below.abs() + noise,
    })
}

/// c/a and the sensitivity of the split to c. A vanishing c at a = 0 is not
/// a pole and contributes nothing.
fn pole_free_term(c: f64, a: f64, t_low: f64) -> (f64, f64) {
    if a.abs() < 1e-12 {
        (0.0, t_low.ln().abs())
    } else {
        (c / a, (t_low.powf(a) / a).abs())
    }
}

fn nonpositive_integer(s: f64) -> Option<u32> {
    let k = (-s).round();
    (s <= 0.0 && (s + k).abs() < 1e-12).then_some(k as u32)
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Finite part and residue of the continued ζ at s.
///
/// Poles sit at s = (D−n)/2 for each c_n ≠ 0 unless that point is a
/// nonpositive integer, where ζ(−k) = (−1)^k k! c_{D+2k}.
pub fn spectral_zeta_continued(m: &ModeList, coeffs: &CoefficientSet, s: f64) -> Result<MeromorphicValue> {
    let order = check_order(m, coeffs, s)?;
    let d = m.dim;
    if let Some(k) = nonpositive_integer(s) {
        let c = coeffs.get(d + 2 * k as usize)?;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let fk = factorial(k);
        return Ok(MeromorphicValue { s, fp: sign * fk * c.value, res: 0.0, bound: fk * c.uncertainty, res_bound: 0.0 });
    }
    let pole = (0..=order).find(|&n| (s - exponent(d, n)).abs() < 1e-12 && coeffs.values[&n].value != 0.0);
    let sp = split(m, coeffs, order, s)?;
    let mut regular = CompensatedSum::new();
    regular.add(sp.integral);
    let mut coeff_bound = 0.0;
    for n in (0..=order).filter(|&n| Some(n) != pole) {
        let c = &coeffs.values[&n];
        let (term, sens) = pole_free_term(c.value, s - exponent(d, n), sp.t_low);
        regular.add(term);
        coeff_bound += c.uncertainty * sens;
    }
    let g = gamma(s);
    match pole {
        None => Ok(MeromorphicValue {
            s,
            fp: regular.value() / g,
            res: 0.0,
            bound: (sp.bound + coeff_bound) / g.abs(),
            res_bound: 0.0,
        }),
        Some(k) => {
            let c = &coeffs.values[&k];
            let psi = digamma(s);
            coeff_bound += c.uncertainty * (sp.t_low.ln().abs() + psi.abs());
            Ok(MeromorphicValue {
                s,
                fp: (regular.value() - c.value * psi) / g,
                res: c.value / g,
                bound: (sp.bound + coeff_bound) / g.abs(),
                res_bound: c.uncertainty / g.abs(),
            })
        }
    }
}

/// ζ(0), ζ′(0) and the finite part and residue at −1/2.
///
/// Near s = 0, 1/Γ(s) = s + γs² + …, so with Γ(s)ζ(s) = c_D/s + R(s) one gets
/// ζ(0) = c_D and ζ′(0) = R(0) + γ c_D.
pub fn zeta_zero_data(m: &ModeList, coeffs: &CoefficientSet) -> Result<ZetaData> {
    let d = m.dim;
    let order = check_order(m, coeffs, 0.0)?;
    let c_d = coeffs.get(d)?;
    let sp = split(m, coeffs, order, 0.0)?;
    let mut r0 = CompensatedSum::new();
    r0.add(sp.integral);
    let mut coeff_bound = 0.0;
    for n in (0..=sp.order).filter(|&n| n != d) {
        let c = &coeffs.values[&n];
        let (term, sens) = pole_free_term(c.value, -exponent(d, n), sp.t_low);
        r0.add(term);
        coeff_bound += c.uncertainty * sens;
    }
    coeff_bound += c_d.uncertainty * (sp.t_low.ln().abs() + EULER_GAMMA);
    let prime = r0.value() + EULER_GAMMA * c_d.value;
    Ok(ZetaData {
        zeta_zero: Estimate { value: c_d.value, bound: c_d.uncertainty },
        zeta_prime_zero: Estimate { value: prime, bound: sp.bound + coeff_bound },
        at_minus_half: spectral_zeta_continued(m, coeffs, -0.5)?,
        coefficients: coeffs.clone(),
    })
}
