//! Cavity shells: a region M inside a large copy M_r, with the free energy
//! E(M) + E(A_r) − E(M_r) and its r → ∞ limit.
//!
//! Coefficient-level quantities (ĉ_n, divergence order, high-T terms) work
//! for any geometry and field. Numerical limits are available for scalar
//! fields on the one-dimensional piston and on concentric balls in D = 2, 3.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::geometry::{Geometry, ShellConfiguration};
use crate::heatkernel::{extract_coefficients, Window};
use crate::hk_coeff::{box_heat_coefficients, shell_c_hat_field, BoundaryCondition, CoefficientSet, FieldKind};
use crate::numeric::Estimate;
use crate::special::{gamma, riemann_zeta};
use crate::spectrum::{annulus_scalar_spectrum, ball_scalar_spectrum, interval_spectrum, ModeList};
use crate::thermo::{regularized_free_energy, series_terms, AsymptoticTerm};
use crate::zeta::{zeta_zero_data, ZetaData};

/// Leading uncancelled divergence of the shell energy as λ → 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Divergence {
    Finite,
    /// λ^power, carried by ĉ_n
    Leading { n: usize, power: i32 },
    /// only the ln λ term, carried by ĉ_{D+1}
    Logarithmic,
}

/// Smallest n ≤ D−1 with ĉ_n ≠ 0 gives λ^{n−D−1}; otherwise a nonzero ĉ_{D+1}
/// leaves a ln λ divergence. A missing ĉ_{D+1} is taken as zero.
pub fn divergence_classification(dim: usize, c_hat: &BTreeMap<usize, f64>) -> Result<Divergence> {
    for n in 0..dim {
        let c = *c_hat.get(&n).ok_or(Error::Coverage(n))?;
        if c != 0.0 {
            return Ok(Divergence::Leading { n, power: n as i32 - dim as i32 - 1 });
        }
    }
    match c_hat.get(&(dim + 1)) {
        Some(&c) if c != 0.0 => Ok(Divergence::Logarithmic),
        _ => Ok(Divergence::Finite),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CHat {
    pub value: f64,
    pub bound: f64,
    /// exact form, where one exists
    pub exact: Option<String>,
}

impl CHat {
    fn from_exact(e: &Exact) -> Self {
        Self { value: e.to_f64(), bound: 0.0, exact: Some(e.to_string()) }
    }
}

/// ĉ_0..ĉ_2 of a shell configuration in exact arithmetic.
pub fn shell_c_hat_set(c: &ShellConfiguration, field: FieldKind, bc: BoundaryCondition) -> Result<BTreeMap<usize, CHat>> {
    (0..=2).map(|n| Ok((n, CHat::from_exact(&shell_c_hat_field(c, field, bc, n)?)))).collect()
}

/// ĉ_n of the interval piston (lengths a, r−a, r). The c_n are affine in the
/// length, so the length parts cancel and one constant part survives.
pub fn piston_c_hat(bc: BoundaryCondition) -> Result<BTreeMap<usize, CHat>> {
    let unit = box_heat_coefficients(&[1.0], 0, bc)?;
    let mut out = BTreeMap::new();
    out.insert(0, CHat::from_exact(&Exact::zero()));
    out.insert(1, CHat::from_exact(&unit[1]));
    for n in 2..=4 {
        out.insert(n, CHat::from_exact(&Exact::zero()));
    }
    Ok(out)
}

fn values(c_hat: &BTreeMap<usize, CHat>) -> BTreeMap<usize, f64> {
    c_hat.iter().map(|(&n, c)| (n, c.value)).collect()
}

/// High-temperature series of the shell free energy: the single-region series
/// with c_n → ĉ_n, ζ(0) → ĉ_D, ζ′(0) → Q and Res → −ĉ_{D+1}/(2√π).
pub fn shell_high_t(dim: usize, c_hat: &BTreeMap<usize, CHat>, q: Estimate, mu: f64, n_max: usize) -> Result<Vec<AsymptoticTerm>> {
    let get = |n: usize| c_hat.get(&n).map(|c| Estimate { value: c.value, bound: c.bound }).ok_or(Error::Coverage(n));
    let cd1 = get(dim + 1)?;
    let res = Estimate { value: -cd1.value / (2.0 * PI.sqrt()), bound: cd1.bound / (2.0 * PI.sqrt()) };
    series_terms(get, dim, get(dim)?, q, res, mu, n_max.max(dim + 1))
}

/// E_reg + (1/√π) Σ_{n<D} 2^{D−n} Γ((D−n+1)/2) ζ_R(D−n+1) ĉ_n T^{D−n+1}.
pub fn renormalized_free_energy(dim: usize, c_hat: &BTreeMap<usize, CHat>, e_reg: Estimate, temperature: f64) -> Result<Estimate> {
    let mut value = e_reg.value;
    let mut bound = e_reg.bound;
    for n in 0..dim {
        let c = c_hat.get(&n).ok_or(Error::Coverage(n))?;
        let k = (dim - n + 1) as f64;
        let f = 2f64.powi((dim - n) as i32) * gamma(0.5 * k) * riemann_zeta(k)? * temperature.powf(k) / PI.sqrt();
        value += f * c.value;
        bound += f * c.bound;
    }
    Ok(Estimate { value, bound })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ShellReport {
    pub dim: usize,
    pub c_hat: BTreeMap<usize, CHat>,
    pub divergence_order: Divergence,
    pub q: Option<Estimate>,
    pub e_reg_shell: Option<Estimate>,
    pub e_ren_shell: Option<Estimate>,
    pub high_t_terms: Vec<AsymptoticTerm>,
}

/// Assemble a report from ĉ_n and whatever of Q and E_reg is known. High-T
/// terms need Q, ĉ_D and ĉ_{D+1}, and are left empty otherwise.
pub fn shell_report(
    dim: usize,
    c_hat: BTreeMap<usize, CHat>,
    q: Option<Estimate>,
    e_reg: Option<Estimate>,
    temperature: f64,
    mu: f64,
) -> Result<ShellReport> {
    let divergence_order = divergence_classification(dim, &values(&c_hat))?;
    let e_ren_shell = e_reg.map(|e| renormalized_free_energy(dim, &c_hat, e, temperature)).transpose()?;
    let n_max = c_hat.keys().copied().max().unwrap_or(0);
    let high_t_terms = match q {
        Some(q) => shell_high_t(dim, &c_hat, q, mu, n_max).unwrap_or_default(),
        None => Vec::new(),
    };
    Ok(ShellReport { dim, c_hat, divergence_order, q, e_reg_shell: e_reg, e_ren_shell, high_t_terms })
}

/// Scalar shells with computable spectra.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ScalarShell {
    /// Interval of length a inside the interval of length ra.
    Piston { a: f64 },
    /// Ball of radius R inside the ball of radius rR; r is the scale factor.
    ConcentricBalls { dim: usize, radius: f64 },
}

impl ScalarShell {
    pub fn dim(&self) -> usize {
        match self {
            Self::Piston { .. } => 1,
            Self::ConcentricBalls { dim, .. } => *dim,
        }
    }

    fn check_r(&self, r: f64) -> Result<()> {
        if r > 1.0 && r.is_finite() {
            Ok(())
        } else {
            Err(Error::DegenerateShell(r))
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Self::Piston { a } if a > 0.0 && a.is_finite() => Ok(()),
            Self::ConcentricBalls { dim: 2 | 3, radius } if radius > 0.0 && radius.is_finite() => Ok(()),
            Self::ConcentricBalls { dim, .. } if dim != 2 && dim != 3 => {
                Err(Error::Unsupported(format!("concentric-ball numerics implemented for D = 2, 3, got {dim}")))
            }
            _ => Err(Error::InvalidGeometry(format!("{self:?}"))),
        }
    }

    /// ĉ_n: exact for the piston, closed-form n ≤ 2 for the balls.
    pub fn c_hat(&self, bc: BoundaryCondition) -> Result<BTreeMap<usize, CHat>> {
        match *self {
            Self::Piston { .. } => piston_c_hat(bc),
            Self::ConcentricBalls { dim, radius } => {
                let c = ShellConfiguration::new(Geometry::ball(dim, radius)?, 2.0)?;
                shell_c_hat_set(&c, FieldKind::Scalar, bc)
            }
        }
    }
}

enum Region {
    Interval(f64),
    Ball(usize, f64),
    Annulus(usize, f64, f64),
}

impl Region {
    /// Outer length scale, which fixes how far the spectrum must reach.
    fn size(&self) -> f64 {
        match *self {
            Self::Interval(l) => l,
            Self::Ball(_, r) => r,
            Self::Annulus(_, _, b) => b,
        }
    }
}

/// Mode list and zeta data of one region. Intervals use exact coefficients;
/// balls and annuli use coefficients fitted to their heat traces.
fn region_data(region: &Region, bc: BoundaryCondition, temperature: f64) -> Result<(ModeList, ZetaData)> {
    let thermal = 60.0 * temperature;
    match *region {
        Region::Interval(l) => {
            // the continuation needs the trace at t ≲ 0.01 whatever the length
            let m = interval_spectrum(l, bc, (200.0 / l).max(60.0).max(thermal))?;
            let c = CoefficientSet::closed_form(&Geometry::interval(l)?, FieldKind::Scalar, bc)?;
            let z = zeta_zero_data(&m, &c)?;
            Ok((m, z))
        }
        Region::Ball(d, _) | Region::Annulus(d, _, _) => {
            let omega_max = (200.0 / region.size()).max(thermal);
            let m = match *region {
                Region::Ball(_, r) => ball_scalar_spectrum(d, r, bc, omega_max)?,
                Region::Annulus(_, a, b) => annulus_scalar_spectrum(d, a, b, bc, omega_max)?,
                Region::Interval(_) => unreachable!(),
            };
            let c = extract_coefficients(&m, d + 4, Window::default())?.into_set(FieldKind::Scalar, bc);
            let z = zeta_zero_data(&m, &c)?;
            Ok((m, z))
        }
    }
}

fn regions(shell: &ScalarShell, r: f64) -> [Region; 3] {
    match *shell {
        ScalarShell::Piston { a } => [Region::Interval(a), Region::Interval((r - 1.0) * a), Region::Interval(r * a)],
        ScalarShell::ConcentricBalls { dim, radius } => [
            Region::Ball(dim, radius),
            Region::Annulus(dim, radius, r * radius),
            Region::Ball(dim, r * radius),
        ],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShellSample {
    pub r: f64,
    pub value: Estimate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShellLimit {
    pub samples: Vec<ShellSample>,
    /// Richardson estimates from each run of three consecutive samples.
    pub estimates: Vec<f64>,
    pub limit: Estimate,
}

/// Quadratic fit in 1/r through three points, evaluated at 1/r = 0.
fn richardson3(r: [f64; 3], v: [f64; 3]) -> f64 {
    let x = r.map(|r| 1.0 / r);
    // Lagrange weights at x = 0
    let w0 = x[1] * x[2] / ((x[0] - x[1]) * (x[0] - x[2]));
    let w1 = x[0] * x[2] / ((x[1] - x[0]) * (x[1] - x[2]));
    let w2 = x[0] * x[1] / ((x[2] - x[0]) * (x[2] - x[1]));
    w0 * v[0] + w1 * v[1] + w2 * v[2]
}

/// Richardson extrapolation to r → ∞ with polynomial order 2 in 1/r.
///
/// The uncertainty is the spread of the last two three-point estimates (with
/// three samples, the distance of the estimate from the last sample), plus
/// the bounds carried by the samples. Estimates whose spread grows beyond the
/// sample bounds are rejected.
pub fn richardson_limit(samples: &[ShellSample]) -> Result<ShellLimit> {
    if samples.len() < 3 {
        return Err(Error::NoLimit(format!("need at least 3 radii, got {}", samples.len())));
    }
    if samples.windows(2).any(|w| !(w[1].r > w[0].r)) {
        return Err(Error::NoLimit("radii must increase".into()));
    }
    let estimates: Vec<f64> = samples
        .windows(3)
        .map(|w| richardson3([w[0].r, w[1].r, w[2].r], [w[0].value.value, w[1].value.value, w[2].value.value]))
        .collect();
    // a three-point estimate amplifies sample errors by Σ|w| ≤ a few; use the
    // last window's weights for the carried bound
    let last = &samples[samples.len() - 3..];
    let carried = {
        let x: Vec<f64> = last.iter().map(|s| 1.0 / s.r).collect();
        let w = [
            x[1] * x[2] / ((x[0] - x[1]) * (x[0] - x[2])),
            x[0] * x[2] / ((x[1] - x[0]) * (x[1] - x[2])),
            x[0] * x[1] / ((x[2] - x[0]) * (x[2] - x[1])),
        ];
        w.iter().zip(last).map(|(w, s)| w.abs() * s.value.bound).sum::<f64>()
    };
    let value = *estimates.last().unwrap();
    let noise = carried + 1e-13 * value.abs().max(1.0);
    let spread = if estimates.len() >= 2 {
        let diffs: Vec<f64> = estimates.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        if diffs.len() >= 2 {
            let (prev, cur) = (diffs[diffs.len() - 2], diffs[diffs.len() - 1]);
            if cur > prev && cur > noise {
                return Err(Error::NoLimit(format!("successive estimates diverge: spread {prev:.3e} then {cur:.3e}")));
            }
        }
        *diffs.last().unwrap()
    } else {
        (value - samples.last().unwrap().value.value).abs()
    };
    Ok(ShellLimit { samples: samples.to_vec(), estimates, limit: Estimate { value, bound: spread + carried } })
}

fn per_r<F>(shell: &ScalarShell, r_list: &[f64], f: F) -> Result<Vec<ShellSample>>
where
    F: Fn(&Region) -> Result<Estimate> + Sync,
{
    shell.validate()?;
    for &r in r_list {
        shell.check_r(r)?;
    }
    r_list
        .par_iter()
        .map(|&r| {
            let [m, a, mr] = regions(shell, r);
            let (em, ea, emr) = (f(&m)?, f(&a)?, f(&mr)?);
            Ok(ShellSample {
                r,
                value: Estimate { value: em.value + ea.value - emr.value, bound: em.bound + ea.bound + emr.bound },
            })
        })
        .collect()
}

/// E_reg(M) + E_reg(A_r) − E_reg(M_r) for each r and the extrapolated limit.
pub fn shell_free_energy_numeric(
    shell: &ScalarShell,
    bc: BoundaryCondition,
    temperature: f64,
    r_list: &[f64],
    mu: f64,
) -> Result<ShellLimit> {
    let samples = per_r(shell, r_list, |region| {
        let (m, z) = region_data(region, bc, temperature)?;
        regularized_free_energy(&m, &z, temperature, mu)
    })?;
    richardson_limit(&samples)
}

/// Q = lim (ζ′(0; M) + ζ′(0; A_r) − ζ′(0; M_r)).
pub fn shell_q(shell: &ScalarShell, bc: BoundaryCondition, r_list: &[f64]) -> Result<ShellLimit> {
    let samples = per_r(shell, r_list, |region| Ok(region_data(region, bc, 0.0)?.1.zeta_prime_zero))?;
    richardson_limit(&samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::evaluate_terms;

    const DIR: BoundaryCondition = BoundaryCondition::Relative;

    fn ch(v: &[(usize, f64)]) -> BTreeMap<usize, CHat> {
        v.iter().map(|&(n, value)| (n, CHat { value, bound: 0.0, exact: None })).collect()
    }

    #[test]
    fn classification() {
        for d in 3..=6 {
            let c = ShellConfiguration::new(Geometry::ball(d, 1.0).unwrap(), 2.0).unwrap();
            let set = shell_c_hat_set(&c, FieldKind::Electromagnetic, BoundaryCondition::Absolute).unwrap();
            let div = divergence_classification(d, &values(&set)).unwrap();
            if d == 3 {
                assert_eq!(div, Divergence::Finite);
            } else {
                assert_eq!(div, Divergence::Leading { n: 1, power: -(d as i32) });
            }
        }
        assert!(matches!(divergence_classification(3, &values(&ch(&[(0, 0.0)]))), Err(Error::Coverage(1))));
        assert_eq!(divergence_classification(2, &values(&ch(&[(0, 0.0), (1, 0.0), (3, 0.2)]))).unwrap(), Divergence::Logarithmic);
    }

    #[test]
    fn piston_coefficients() {
        for bc in [DIR, BoundaryCondition::Absolute] {
            let c = piston_c_hat(bc).unwrap();
            assert_eq!(c[&0].value, 0.0);
            assert_eq!(c[&1].value, -0.5);
            assert_eq!(divergence_classification(1, &values(&c)).unwrap(), Divergence::Finite);
        }
    }

    #[test]
    fn renormalization() {
        let e = Estimate::exact(0.25);
        let synthetic = renormalized_free_energy(1, &ch(&[(0, 1.0)]), Estimate::exact(0.0), 2.0).unwrap();
        assert!((synthetic.value - 8.0 * PI * PI / 6.0 / PI.sqrt()).abs() < 1e-13);
        assert!((synthetic.value - 7.4244).abs() < 1e-4);
        let piston = piston_c_hat(DIR).unwrap();
        assert_eq!(renormalized_free_energy(1, &piston, e, 3.0).unwrap(), e);
        let c = ShellConfiguration::new(Geometry::ball(3, 1.0).unwrap(), 3.0).unwrap();
        let em = shell_c_hat_set(&c, FieldKind::Electromagnetic, DIR).unwrap();
        assert_eq!(renormalized_free_energy(3, &em, e, 5.0).unwrap(), e);
    }

    #[test]
    fn high_t_structure() {
        // only ĉ_D ≠ 0: one T ln T term and one T term carry anything
        let c = ch(&[(0, 0.0), (1, 0.0), (2, 0.0), (3, 0.7), (4, 0.0)]);
        let terms = shell_high_t(3, &c, Estimate::exact(0.4), 1.0, 4).unwrap();
        let nonzero: Vec<_> = terms.iter().filter(|t| t.coefficient != 0.0).collect();
        assert_eq!(nonzero.len(), 2);
        assert!(nonzero.iter().any(|t| t.power == 1 && t.log && t.coefficient == -0.7));
        assert!(nonzero.iter().any(|t| t.power == 1 && !t.log && t.coefficient == -0.2));
        assert!(matches!(shell_high_t(3, &ch(&[(0, 0.0)]), Estimate::exact(0.0), 1.0, 4), Err(Error::Coverage(_))));
    }

    #[test]
    fn richardson_exact_on_quadratics() {
        let f = |r: f64| 2.0 + 3.0 / r - 5.0 / (r * r);
        let samples: Vec<_> = [4.0, 8.0, 16.0, 32.0].iter().map(|&r| ShellSample { r, value: Estimate::exact(f(r)) }).collect();
        let lim = richardson_limit(&samples).unwrap();
        assert!((lim.limit.value - 2.0).abs() < 1e-12);
        let wild: Vec<_> = [2.0, 3.0, 4.0, 5.0, 6.0].iter().map(|&r| ShellSample { r, value: Estimate::exact(r.powi(4)) }).collect();
        assert!(matches!(richardson_limit(&wild), Err(Error::NoLimit(_))));
        assert!(matches!(richardson_limit(&samples[..2]), Err(Error::NoLimit(_))));
    }

    #[test]
    fn piston_zero_temperature() {
        for (a, target) in [(1.0, -PI / 24.0), (2.0, -PI / 48.0)] {
            let shell = ScalarShell::Piston { a };
            let rs = [10.0, 20.0, 40.0, 80.0, 160.0];
            let lim = shell_free_energy_numeric(&shell, DIR, 0.0, &rs, 1.0).unwrap();
            assert!((lim.limit.value - target).abs() < 1e-6, "{lim:?}");
            assert!((lim.limit.value - target).abs() <= lim.limit.bound);
            for s in &lim.samples {
                let exact = -PI / 24.0 * (1.0 / a + 1.0 / ((s.r - 1.0) * a) - 1.0 / (s.r * a));
                assert!((s.value.value - exact).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn piston_q() {
        for a in [1.0, 0.25] {
            let shell = ScalarShell::Piston { a };
            let rs = [10.0, 20.0, 40.0, 80.0, 160.0];
            let lim = shell_q(&shell, DIR, &rs).unwrap();
            assert!((lim.limit.value + (2.0 * a).ln()).abs() < 1e-6, "{lim:?}");
            // r-dependence ln(r/(r−1)) ≈ 1/r
            let s = &lim.samples;
            let d1 = s[0].value.value + (2.0 * a).ln();
            let d2 = s[1].value.value + (2.0 * a).ln();
            let exponent = (d1 / d2).ln() / (s[1].r / s[0].r).ln();
            assert!((exponent - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn piston_uncertainty_shrinks() {
        let shell = ScalarShell::Piston { a: 1.0 };
        let short = shell_free_energy_numeric(&shell, DIR, 0.3, &[4.0, 8.0, 16.0, 32.0], 1.0).unwrap();
        let long = shell_free_energy_numeric(&shell, DIR, 0.3, &[4.0, 8.0, 16.0, 32.0, 64.0, 128.0], 1.0).unwrap();
        assert!(long.limit.bound < short.limit.bound);
        assert!((long.limit.value - short.limit.value).abs() <= short.limit.bound + long.limit.bound);
    }

    #[test]
    fn piston_warm_limit() {
        let shell = ScalarShell::Piston { a: 1.0 };
        let rs = [10.0, 20.0, 40.0, 80.0, 160.0];
        let lim = shell_free_energy_numeric(&shell, DIR, 0.5, &rs, 1.0).unwrap().limit;
        let direct = shell_free_energy_numeric(&shell, DIR, 0.5, &[200.0, 201.0, 202.0], 1.0).unwrap();
        // at finite r the sample still carries (T/2) ln(1 − 1/r) from the ζ′(0) = −ln 2L parts
        let at200 = direct.samples[0].value.value - 0.25 * (1.0 - 1.0 / 200.0f64).ln();
        assert!((lim.value - at200).abs() <= lim.bound, "{lim:?} vs {at200}");
        // doubling the outer length moves the shell energy by less than the extrapolation uncertainty
        let far = shell_free_energy_numeric(&shell, DIR, 0.0, &[400.0, 800.0, 1600.0], 1.0).unwrap();
        let (e1, e2) = (far.samples[0].value.value, far.samples[1].value.value);
        let zero = shell_free_energy_numeric(&shell, DIR, 0.0, &rs, 1.0).unwrap().limit;
        assert!((e1 - e2).abs() < zero.bound, "{e1} {e2} {zero:?}");
    }

    #[test]
    fn piston_high_t() {
        let shell = ScalarShell::Piston { a: 1.0 };
        let rs = [10.0, 20.0, 40.0, 80.0];
        let c = piston_c_hat(DIR).unwrap();
        let q = shell_q(&shell, DIR, &rs).unwrap().limit;
        let terms = shell_high_t(1, &c, q, 1.0, 4).unwrap();
        let t = 20.0;
        let numeric = shell_free_energy_numeric(&shell, DIR, t, &rs, 1.0).unwrap().limit.value;
        let series = evaluate_terms(&terms, t).value;
        assert!((numeric - series).abs() < 1e-4 * numeric.abs(), "{numeric} vs {series}");
        let residual = |t: f64| {
            let n = shell_free_energy_numeric(&shell, DIR, t, &rs, 1.0).unwrap().limit.value;
            (n - evaluate_terms(&terms, t).value).abs()
        };
        let r = [residual(0.1), residual(0.2), residual(0.4)];
        assert!(r[0] > r[1] && r[1] > r[2], "{r:?}");
    }

    #[test]
    fn disk_shell_sample() {
        let shell = ScalarShell::ConcentricBalls { dim: 2, radius: 1.0 };
        let s = per_r(&shell, &[2.0], |region| {
            let (m, z) = region_data(region, DIR, 0.0)?;
            regularized_free_energy(&m, &z, 0.0, 1.0)
        })
        .unwrap();
        assert!(s[0].value.value.is_finite() && s[0].value.bound < 1e-3, "{s:?}");
        assert!(matches!(per_r(&shell, &[0.5], |_| Ok(Estimate::exact(0.0))), Err(Error::DegenerateShell(_))));
        let d7 = ScalarShell::ConcentricBalls { dim: 7, radius: 1.0 };
        assert!(matches!(shell_q(&d7, DIR, &[2.0, 3.0, 4.0]), Err(Error::Unsupported(_))));
        let c = shell.c_hat(DIR).unwrap();
        assert_eq!(c[&0].value, 0.0);
        assert!(c[&1].value < 0.0);
    }
}
