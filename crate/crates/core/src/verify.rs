//! Built-in invariant suite: coefficient identities, zeta relations,
//! thermal-zeta representation agreement and the free-energy consistency
//! between the thermal zeta and the mode sum.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{Geometry, ShellConfiguration};
use crate::heatkernel::{extract_coefficients, Window};
use crate::hk_coeff::{a_n_pform, c_n_em, shell_c1_closed_form, shell_c_hat, BoundaryCondition, CoefficientSet, FieldKind};
use crate::spectrum::{box_pform_spectrum, interval_spectrum};
use crate::thermo::{regularized_free_energy, regularized_zero_t, thermal_correction, thermal_zeta_bessel, thermal_zeta_direct};
use crate::zeta::{spectral_zeta_continued, zeta_zero_data};

const BCS: [BoundaryCondition; 2] = [BoundaryCondition::Absolute, BoundaryCondition::Relative];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// worst deviation seen, in the units of the check
    pub deviation: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn new(name: &str, deviation: f64, tolerance: f64, detail: String) -> Self {
        Self { name: name.into(), passed: deviation <= tolerance, deviation, tolerance, detail }
    }

    fn failed(name: &str, detail: String) -> Self {
        Self { name: name.into(), passed: false, deviation: f64::INFINITY, tolerance: 0.0, detail }
    }
}

fn guard(name: &str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::failed(name, e.to_string()))
}

fn identity_geometries() -> Result<Vec<Geometry>> {
    let mut g = vec![Geometry::interval(1.0)?, Geometry::interval(PI)?];
    for lengths in [vec![1.0], vec![1.0, 1.0], vec![1.0, 2.0, 0.5], vec![1.5, 1.0, 0.75, 2.0]] {
        g.push(Geometry::cuboid(&lengths)?.with_corner_override());
    }
    for d in 1..=6 {
        g.push(Geometry::ball(d, 1.0)?);
        g.push(Geometry::ball(d, 2.5)?);
    }
    Ok(g)
}

/// Exact-arithmetic coefficient identities. The deviation counts failing
/// identities; the tolerance is zero.
pub fn coefficient_identities() -> Check {
    let name = "coefficient identities";
    guard(name, || {
        let mut failures = Vec::new();
        let mut count = 0usize;
        for g in identity_geometries()? {
            let d = g.dim() as i64;
            for bc in BCS {
                for n in 0..=2 {
                    count += 2;
                    if c_n_em(&g, bc, n)? != a_n_pform(&g, 1, bc, n)? - a_n_pform(&g, 0, bc, n)? {
                        failures.push(format!("EM subtraction {g:?} {bc} n={n}"));
                    }
                    for p in 0..=d {
                        if a_n_pform(&g, p, BoundaryCondition::Relative, n)? != a_n_pform(&g, d - p, BoundaryCondition::Absolute, n)? {
                            failures.push(format!("duality {g:?} p={p} n={n}"));
                        }
                    }
                }
                for r in [2.0, 3.5] {
                    count += 4;
                    let c = ShellConfiguration::new(g.clone(), r)?;
                    if !shell_c_hat(&c, bc, 0)?.is_zero() || !shell_c_hat(&c, bc, 2)?.is_zero() {
                        failures.push(format!("ĉ0/ĉ2 {g:?} {bc} r={r}"));
                    }
                    let c1 = shell_c_hat(&c, bc, 1)?;
                    if c1 != shell_c1_closed_form(&g, bc) {
                        failures.push(format!("ĉ1 closed form {g:?} {bc} r={r}"));
                    }
                    if c1.is_zero() != (d == 3) {
                        failures.push(format!("ĉ1 = 0 iff D = 3 {g:?} {bc}"));
                    }
                }
            }
        }
        let detail = if failures.is_empty() { format!("{count} identities hold") } else { failures.join("; ") };
        Ok(Check::new(name, failures.len() as f64, 0.0, detail))
    })
}

/// ζ(0), FP at −½ and ζ′(0) for Dirichlet intervals against closed forms,
/// plus ζ(0) = c_D and Res = −c_{D+1}/(2√π) with coefficients fitted to a
/// box trace.
pub fn zeta_relations() -> Check {
    let name = "zeta relations";
    guard(name, || {
        let mut worst: f64 = 0.0;
        let mut lines = Vec::new();
        for l in [1.0, PI, 2.5] {
            let m = interval_spectrum(l, BoundaryCondition::Relative, 2000.0)?;
            let c = CoefficientSet::closed_form(&Geometry::interval(l)?, FieldKind::Scalar, BoundaryCondition::Relative)?;
            let z = zeta_zero_data(&m, &c)?;
            let devs = [
                (z.zeta_zero.value + 0.5).abs(),
                (z.at_minus_half.fp + PI / (12.0 * l)).abs(),
                (z.zeta_prime_zero.value + (2.0 * l).ln()).abs(),
            ];
            lines.push(format!("L={l}: |Δζ(0)|={:.1e} |ΔFP|={:.1e} |Δζ′(0)|={:.1e}", devs[0], devs[1], devs[2]));
            worst = worst.max(devs.into_iter().fold(0.0, f64::max));
        }
        let interval_ok = worst <= 1e-8;

        // coefficients fitted to the spectrum, compared with the exact box values
        // c_2 = 1/4 (corners) and c_3 = 0
        let lengths = [1.0, 1.5];
        let m = box_pform_spectrum(&lengths, 0, BoundaryCondition::Relative, 250.0)?;
        let fitted = extract_coefficients(&m, 5, Window::default())?.into_set(FieldKind::Scalar, BoundaryCondition::Relative);
        let z = zeta_zero_data(&m, &fitted)?;
        let z0_dev = (z.zeta_zero.value - 0.25).abs();
        let z0_tol = z.zeta_zero.bound.max(fitted.get(2)?.uncertainty) + 1e-9;
        let res_dev = z.at_minus_half.res.abs();
        let res_tol = z.at_minus_half.res_bound.max(fitted.get(3)?.uncertainty / (2.0 * PI.sqrt())) + 1e-9;
        lines.push(format!(
            "box 1×1.5: ζ(0)−c₂ = {z0_dev:.1e} (tol {z0_tol:.1e}), Res+c₃/(2√π) = {res_dev:.1e} (tol {res_tol:.1e})"
        ));
        let passed = interval_ok && z0_dev <= z0_tol && res_dev <= res_tol;
        Ok(Check { name: name.into(), passed, deviation: worst, tolerance: 1e-8, detail: lines.join("; ") })
    })
}

/// thermal_zeta_direct against thermal_zeta_bessel at s = 2 for the
/// Dirichlet interval L = π.
pub fn representation_agreement() -> Check {
    let name = "thermal zeta representations";
    guard(name, || {
        let m = interval_spectrum(PI, BoundaryCondition::Relative, 2000.0)?;
        let c = CoefficientSet::closed_form(&Geometry::interval(PI)?, FieldKind::Scalar, BoundaryCondition::Relative)?;
        let shift = spectral_zeta_continued(&m, &c, 1.5)?;
        let mut worst: f64 = 0.0;
        let mut lines = Vec::new();
        for t in [0.5, 1.0, 2.0] {
            let d = thermal_zeta_direct(&m, t, 2.0)?;
            let b = thermal_zeta_bessel(&m, t, 2.0, &shift)?;
            let rel = (d.value - b.value).abs() / d.value.abs();
            lines.push(format!("T={t}: {rel:.1e}"));
            worst = worst.max(rel);
        }
        Ok(Check::new(name, worst, 1e-8, lines.join("; ")))
    })
}

/// −(T/2)(ζ_T′(0) + ln(μ̃²)ζ_T(0)) against the zero-temperature energy plus
/// the thermal mode sum for the Dirichlet interval L = π.
pub fn free_energy_consistency() -> Check {
    let name = "thermal zeta vs mode sum";
    guard(name, || {
        let m = interval_spectrum(PI, BoundaryCondition::Relative, 2000.0)?;
        let c = CoefficientSet::closed_form(&Geometry::interval(PI)?, FieldKind::Scalar, BoundaryCondition::Relative)?;
        let z = zeta_zero_data(&m, &c)?;
        let mut worst: f64 = 0.0;
        let mut lines = Vec::new();
        for t in [0.1, 1.0, 10.0] {
            let lhs = regularized_free_energy(&m, &z, t, 1.0)?.value;
            let rhs = regularized_zero_t(&z, 1.0)?.value + thermal_correction(&m, t)?.value;
            let dev = (lhs - rhs).abs();
            lines.push(format!("T={t}: {dev:.1e}"));
            worst = worst.max(dev);
        }
        Ok(Check::new(name, worst, 1e-7, lines.join("; ")))
    })
}

/// The full suite in a fixed order.
pub fn run_all() -> Vec<Check> {
    vec![coefficient_identities(), zeta_relations(), representation_agreement(), free_energy_consistency()]
}
