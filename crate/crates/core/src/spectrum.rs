//! Truncated Laplace spectra with multiplicities on intervals, boxes, balls
//! and spherical annuli.
//!
//! Every generator returns all modes with 0 < ω ≤ omega_max. Zero modes are
//! always dropped.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::hk_coeff::{box_heat_coefficients, subsets, BoundaryCondition, FieldKind};
use crate::numeric::{scan_roots, upper_gamma_half};
use crate::special::bessel::bessel_jy;
use crate::special::gamma;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Mode {
    pub omega: f64,
    pub multiplicity: u64,
}

/// Smooth counting function N_s(ω) = c0 ω^D/Γ(D/2+1) + c1 ω^{D−1}/Γ((D+1)/2)
/// built from the two leading heat coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailModel {
    pub dim: usize,
    pub c0: f64,
    pub c1: f64,
}

impl TailModel {
    pub fn smooth_count(&self, omega: f64) -> f64 {
        let d = self.dim as f64;
        self.c0 * omega.powf(d) / gamma(0.5 * d + 1.0) + self.c1 * omega.powf(d - 1.0) / gamma(0.5 * (d + 1.0))
    }

    /// Coefficients a_k of the envelope N_up(ω) = Σ_k a_k ω^k ≥ N(ω):
    /// twice the smooth count in absolute value, plus one.
    pub fn envelope(&self) -> Vec<(u32, f64)> {
        let d = self.dim as f64;
        let mut terms = vec![
            (self.dim as u32, 2.0 * self.c0.abs() / gamma(0.5 * d + 1.0)),
            (self.dim as u32 - 1, 2.0 * self.c1.abs() / gamma(0.5 * (d + 1.0))),
        ];
        if let Some(t) = terms.iter_mut().find(|t| t.0 == 0) {
            t.1 += 1.0;
        } else {
            terms.push((0, 1.0));
        }
        terms
    }

    /// Bound on Σ_{ω_j > Ω} f(ω_j) for decreasing f, given
    /// ∫_Ω^∞ ω^k (−f′(ω)) dω for each envelope power k.
    pub fn tail_bound(&self, moment: impl Fn(u32) -> f64) -> f64 {
        self.envelope().into_iter().map(|(k, a)| a * moment(k)).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeList {
    pub modes: Vec<Mode>,
    pub dim: usize,
    pub omega_max: f64,
    pub source: String,
    pub tail: Option<TailModel>,
}

impl ModeList {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn omega_min(&self) -> Option<f64> {
        self.modes.first().map(|m| m.omega)
    }

    pub fn count_below(&self, omega: f64) -> u64 {
        self.modes.iter().take_while(|m| m.omega <= omega).map(|m| m.multiplicity).sum()
    }

    /// The spectrum of the region with every length multiplied by r.
    pub fn scaled(&self, r: f64) -> Self {
        let tail = self.tail.map(|t| TailModel {
            dim: t.dim,
            c0: t.c0 * r.powi(t.dim as i32),
            c1: t.c1 * r.powi(t.dim as i32 - 1),
        });
        Self {
            modes: self.modes.iter().map(|m| Mode { omega: m.omega / r, multiplicity: m.multiplicity }).collect(),
            dim: self.dim,
            omega_max: self.omega_max / r,
            source: format!("{} scaled by {r}", self.source),
            tail,
        }
    }

    pub fn tail_model(&self) -> Result<&TailModel> {
        self.tail.as_ref().ok_or(Error::BoundUnavailable)
    }
}

/// Upper bound on Σ_{ω > omega_max} e^{−tω²}.
pub fn heat_tail_bound(m: &ModeList, t: f64) -> Result<f64> {
    let tail = m.tail_model()?;
    let x = t * m.omega_max * m.omega_max;
    Ok(tail.tail_bound(|k| t.powf(-0.5 * k as f64) * upper_gamma_half(k + 2, x)))
}

fn empty_warning(list: &ModeList) {
    if list.is_empty() {
        log::warn!("{}: no modes below omega_max = {}", list.source, list.omega_max);
    }
}

fn merge_sorted(mut raw: Vec<(f64, u64)>) -> Vec<Mode> {
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<Mode> = Vec::with_capacity(raw.len());
    for (omega, mult) in raw {
        match out.last_mut() {
            Some(last) if (omega - last.omega).abs() <= 1e-12 * omega => last.multiplicity += mult,
            _ => out.push(Mode { omega, multiplicity: mult }),
        }
    }
    out
}

pub fn interval_spectrum(length: f64, bc: BoundaryCondition, omega_max: f64) -> Result<ModeList> {
    Geometry::interval(length)?;
    let n_max = (omega_max * length / PI).floor() as u64;
    let modes = (1..=n_max).map(|n| Mode { omega: n as f64 * PI / length, multiplicity: 1 }).collect();
    let c = box_heat_coefficients(&[length], 0, bc)?;
    let list = ModeList {
        modes,
        dim: 1,
        omega_max,
        source: format!("interval L={length} {}", bc.scalar_name()),
        tail: Some(TailModel { dim: 1, c0: c[0].to_f64(), c1: c[1].to_f64() }),
    };
    empty_warning(&list);
    Ok(list)
}

/// Squared frequencies of one component set, keyed exactly.
fn box_component_modes(
    lengths: &[f64],
    sine: &[bool],
    omega_max: f64,
    exact_keys: bool,
    out: &mut BTreeMap<u64, u64>,
) {
    let d = lengths.len();
    let w2max = omega_max * omega_max;
    let mut n = vec![0u64; d];
    // odometer over the lattice, pruning by the partial sum
    fn rec(
        j: usize,
        partial: f64,
        lengths: &[f64],
        sine: &[bool],
        w2max: f64,
        exact_keys: bool,
        n: &mut Vec<u64>,
        out: &mut BTreeMap<u64, u64>,
    ) {
        let d = lengths.len();
        if j == d {
            if n.iter().all(|&k| k == 0) {
                return;
            }
            let w2: f64 = (0..d).map(|i| (n[i] as f64 * PI / lengths[i]).powi(2)).sum();
            if w2 > w2max {
                return;
            }
            let key = if exact_keys { n.iter().map(|k| k * k).sum() } else { w2.to_bits() };
            *out.entry(key).or_insert(0) += 1;
            return;
        }
        let mut k = if sine[j] { 1 } else { 0 };
        loop {
            let term = (k as f64 * PI / lengths[j]).powi(2);
            if partial + term > w2max * (1.0 + 1e-12) {
                break;
            }
            n[j] = k;
            rec(j + 1, partial + term, lengths, sine, w2max, exact_keys, n, out);
            k += 1;
        }
        n[j] = 0;
    }
    rec(0, 0.0, lengths, sine, w2max, exact_keys, &mut n, out);
}

fn box_raw(lengths: &[f64], p: usize, bc: BoundaryCondition, omega_max: f64, exact: bool) -> BTreeMap<u64, u64> {
    let mut out = BTreeMap::new();
    for set in subsets(lengths.len(), p) {
        let sine: Vec<bool> =
            (0..lengths.len()).map(|j| set.contains(&j) == (bc == BoundaryCondition::Absolute)).collect();
        box_component_modes(lengths, &sine, omega_max, exact, &mut out);
    }
    out
}

fn box_modes_from_raw(lengths: &[f64], raw: BTreeMap<u64, u64>, exact: bool) -> Vec<Mode> {
    if exact {
        let scale = PI / lengths[0];
        raw.into_iter().map(|(k, m)| Mode { omega: scale * (k as f64).sqrt(), multiplicity: m }).collect()
    } else {
        merge_sorted(raw.into_iter().map(|(bits, m)| (f64::from_bits(bits).sqrt(), m)).collect())
    }
}

fn validate_lengths(lengths: &[f64]) -> Result<()> {
    Geometry::cuboid(lengths).map(|_| ())
}

/// Spectrum of the Hodge Laplacian on p-forms on a box.
///
/// For absolute conditions the component dx^S has a sine factor (n ≥ 1) in
/// each direction of S and a cosine factor (n ≥ 0) elsewhere; relative
/// conditions swap the two.
pub fn box_pform_spectrum(lengths: &[f64], p: usize, bc: BoundaryCondition, omega_max: f64) -> Result<ModeList> {
    validate_lengths(lengths)?;
    let d = lengths.len();
    if p > d {
        return Err(Error::FormDegree { p: p as i64, dim: d });
    }
    let exact = lengths.iter().all(|&l| l == lengths[0]);
    let raw = box_raw(lengths, p, bc, omega_max, exact);
    let c = box_heat_coefficients(lengths, p, bc)?;
    let list = ModeList {
        modes: box_modes_from_raw(lengths, raw, exact),
        dim: d,
        omega_max,
        source: format!("box {lengths:?} {p}-form {bc}"),
        tail: Some(TailModel { dim: d, c0: c[0].to_f64(), c1: c[1].to_f64() }),
    };
    empty_warning(&list);
    Ok(list)
}

/// Electromagnetic spectrum on a box: the 1-form spectrum with the 0-form
/// spectrum removed as a multiset.
pub fn box_em_spectrum(lengths: &[f64], bc: BoundaryCondition, omega_max: f64) -> Result<ModeList> {
    validate_lengths(lengths)?;
    let d = lengths.len();
    let exact = lengths.iter().all(|&l| l == lengths[0]);
    let mut one = box_raw(lengths, 1, bc, omega_max, exact);
    let zero = box_raw(lengths, 0, bc, omega_max, exact);
    for (k, m) in zero {
        let entry = one.get_mut(&k).ok_or_else(|| Error::Numerical("0-form mode missing from 1-form spectrum".into()))?;
        *entry = entry.checked_sub(m).ok_or_else(|| Error::Numerical("0-form multiplicity exceeds 1-form".into()))?;
    }
    one.retain(|_, m| *m > 0);
    let c1 = box_heat_coefficients(lengths, 1, bc)?;
    let c0 = box_heat_coefficients(lengths, 0, bc)?;
    let list = ModeList {
        modes: box_modes_from_raw(lengths, one, exact),
        dim: d,
        omega_max,
        source: format!("box {lengths:?} electromagnetic {bc}"),
        tail: Some(TailModel {
            dim: d,
            c0: (&c1[0] - &c0[0]).to_f64(),
            c1: (&c1[1] - &c0[1]).to_f64(),
        }),
    };
    empty_warning(&list);
    Ok(list)
}

/// Number of independent spherical harmonics of degree l on S^{D−1}.
pub fn degeneracy(l: u64, d: usize) -> u64 {
    fn binom(n: i64, k: i64) -> u64 {
        if n < k || k < 0 {
            return 0;
        }
        let k = k.min(n - k);
        (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as u64
    }
    let d = d as i64;
    let l = l as i64;
    binom(l + d - 1, d - 1) - binom(l + d - 3, d - 1)
}

/// Radial eigenfunction combination whose zeros give the Neumann condition:
/// (1 − D/2) J_ν(z) + z J_ν′(z), and likewise for Y.
fn neumann_weight(d: usize, nu: f64, z: f64) -> (f64, f64) {
    let v = bessel_jy(nu, z);
    let w = 1.0 - 0.5 * d as f64;
    (w * v.j + z * v.jp, w * v.y + z * v.yp)
}

/// Roots in (ν-dependent lower bound, zmax] of the ball radial condition.
pub fn ball_radial_zeros(d: usize, l: u64, bc: BoundaryCondition, zmax: f64) -> Result<Vec<f64>> {
    let nu = l as f64 + 0.5 * d as f64 - 1.0;
    match bc {
        BoundaryCondition::Relative => {
            let start = nu.max(1e-3);
            if start >= zmax {
                return Ok(Vec::new());
            }
            scan_roots(|z| bessel_jy(nu, z).j, start, zmax, 0.5)
        }
        BoundaryCondition::Absolute => {
            let start = ((l * (l + d as u64 - 2)) as f64).sqrt().max(1e-3);
            if start >= zmax {
                return Ok(Vec::new());
            }
            scan_roots(|z| neumann_weight(d, nu, z).0, start, zmax, 0.25)
        }
    }
}

fn ball_lower_bound(d: usize, l: u64, bc: BoundaryCondition) -> f64 {
    match bc {
        BoundaryCondition::Relative => l as f64 + 0.5 * d as f64 - 1.0,
        BoundaryCondition::Absolute => ((l * (l + d as u64 - 2)) as f64).sqrt(),
    }
}

fn collect_radial(
    d: usize,
    scale: f64,
    omega_max: f64,
    lower: impl Fn(u64) -> f64,
    zeros: impl Fn(u64) -> Result<Vec<f64>> + Sync,
) -> Result<Vec<Mode>> {
    let zmax = omega_max * scale;
    let mut l_end = 0;
    while lower(l_end) < zmax {
        l_end += 1;
    }
    let per_l: Vec<Result<Vec<(f64, u64)>>> = (0..l_end)
        .into_par_iter()
        .map(|l| {
            let g = degeneracy(l, d);
            Ok(zeros(l)?.into_iter().map(|z| (z / scale, g)).collect())
        })
        .collect();
    let mut raw = Vec::new();
    for r in per_l {
        raw.extend(r?);
    }
    Ok(merge_sorted(raw))
}

/// Scalar Laplacian on a D-ball of radius R.
pub fn ball_scalar_spectrum(d: usize, radius: f64, bc: BoundaryCondition, omega_max: f64) -> Result<ModeList> {
    if d < 2 {
        return Err(Error::InvalidGeometry("ball spectra need D ≥ 2; use the interval for D = 1".into()));
    }
    let g = Geometry::ball(d, radius)?;
    let modes = collect_radial(d, radius, omega_max, |l| ball_lower_bound(d, l, bc), |l| {
        ball_radial_zeros(d, l, bc, omega_max * radius)
    })?;
    let list = ModeList {
        modes,
        dim: d,
        omega_max,
        source: format!("ball D={d} R={radius} {}", bc.scalar_name()),
        tail: Some(scalar_tail(&g, bc)?),
    };
    empty_warning(&list);
    Ok(list)
}

fn scalar_tail(g: &Geometry, bc: BoundaryCondition) -> Result<TailModel> {
    let m = g.measures();
    Ok(TailModel {
        dim: m.dim,
        c0: crate::hk_coeff::a_n_measures(&m, 0, bc, 0)?.to_f64(),
        c1: crate::hk_coeff::a_n_measures(&m, 0, bc, 1)?.to_f64(),
    })
}

/// Cross-product radial function of the annulus a < r < b.
pub fn annulus_radial_function(d: usize, nu: f64, a: f64, b: f64, bc: BoundaryCondition, z: f64) -> f64 {
    let (ja, ya, jb, yb) = match bc {
        BoundaryCondition::Relative => {
            let va = bessel_jy(nu, z * a);
            let vb = bessel_jy(nu, z * b);
            (va.j, va.y, vb.j, vb.y)
        }
        BoundaryCondition::Absolute => {
            let (ja, ya) = neumann_weight(d, nu, z * a);
            let (jb, yb) = neumann_weight(d, nu, z * b);
            (ja, ya, jb, yb)
        }
    };
    // normalise by |Y(za)|, which is the largest factor near the turning point
    if !ya.is_finite() {
        return -jb * ya.signum();
    }
    ja * (yb / ya.abs()) - jb * ya.signum()
}

pub fn annulus_radial_zeros(d: usize, l: u64, a: f64, b: f64, bc: BoundaryCondition, zmax: f64) -> Result<Vec<f64>> {
    let nu = l as f64 + 0.5 * d as f64 - 1.0;
    let start = (((l * (l + d as u64 - 2)) as f64).sqrt() / b).max(1e-6 / b);
    if start >= zmax {
        return Ok(Vec::new());
    }
    let step = PI / (b - a) / 8.0;
    scan_roots(|z| annulus_radial_function(d, nu, a, b, bc, z), start, zmax, step)
}

/// Scalar Laplacian on the spherical shell r_in < |x| < r_out in D dimensions.
pub fn annulus_scalar_spectrum(
    d: usize,
    r_in: f64,
    r_out: f64,
    bc: BoundaryCondition,
    omega_max: f64,
) -> Result<ModeList> {
    if d < 2 {
        return Err(Error::InvalidGeometry("annulus spectra need D ≥ 2".into()));
    }
    if !(r_in > 0.0 && r_out > r_in && r_out.is_finite()) {
        return Err(Error::InvalidGeometry(format!("annulus needs 0 < r_in < r_out, got {r_in}, {r_out}")));
    }
    let lower = |l: u64| ((l * (l + d as u64 - 2)) as f64).sqrt() / r_out;
    let modes = collect_radial(d, 1.0, omega_max, lower, |l| {
        annulus_radial_zeros(d, l, r_in, r_out, bc, omega_max)
    })?;
    let inner = Geometry::ball(d, r_in)?.measures();
    let outer = Geometry::ball(d, r_out)?.measures();
    let annulus = Geometry::from_measures(crate::geometry::Measures {
        dim: d,
        vol_m: &outer.vol_m - &inner.vol_m,
        vol_b: &outer.vol_b + &inner.vol_b,
        int_tau: crate::exact::Exact::zero(),
        int_tr_l: &outer.int_tr_l - &inner.int_tr_l,
        corners: crate::geometry::Corners::None,
    })?;
    let list = ModeList {
        modes,
        dim: d,
        omega_max,
        source: format!("annulus D={d} ({r_in}, {r_out}) {}", bc.scalar_name()),
        tail: Some(scalar_tail(&annulus, bc)?),
    };
    empty_warning(&list);
    Ok(list)
}

/// Spectrum of a field on a geometry, where one is available.
pub fn spectrum_for(g: &Geometry, field: FieldKind, bc: BoundaryCondition, omega_max: f64) -> Result<ModeList> {
    match (g, field) {
        (Geometry::Interval { .. }, FieldKind::Scalar | FieldKind::PForm(0)) => {
            interval_spectrum(g.side_lengths().unwrap()[0], bc, omega_max)
        }
        (Geometry::Interval { .. } | Geometry::Box { .. }, _) => {
            let lengths = g.side_lengths().unwrap();
            match field {
                FieldKind::Scalar => box_pform_spectrum(&lengths, 0, bc, omega_max),
                FieldKind::PForm(p) => box_pform_spectrum(&lengths, p, bc, omega_max),
                FieldKind::Electromagnetic => box_em_spectrum(&lengths, bc, omega_max),
            }
        }
        (Geometry::Ball { dim, .. }, FieldKind::Scalar | FieldKind::PForm(0)) => {
            ball_scalar_spectrum(*dim, g.radius().unwrap(), bc, omega_max)
        }
        (Geometry::Ball { .. }, _) => {
            Err(Error::Unsupported("form and electromagnetic spectra on balls are not available".into()))
        }
        (Geometry::Generic(_), _) => Err(Error::Unsupported("a generic geometry carries no spectrum".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn omegas(m: &ModeList) -> Vec<(f64, u64)> {
        m.modes.iter().map(|m| (m.omega, m.multiplicity)).collect()
    }

    /// Brute-force lattice enumeration without pruning or merging.
    fn box_oracle(lengths: &[f64], p: usize, bc: BoundaryCondition, omega_max: f64) -> Vec<f64> {
        let d = lengths.len();
        let nmax: Vec<u64> = lengths.iter().map(|l| (omega_max * l / PI) as u64 + 1).collect();
        let mut out = Vec::new();
        for set in subsets(d, p) {
            let total: u64 = nmax.iter().map(|n| n + 1).product();
            for idx in 0..total {
                let mut rem = idx;
                let mut n = vec![0u64; d];
                for j in 0..d {
                    n[j] = rem % (nmax[j] + 1);
                    rem /= nmax[j] + 1;
                }
                let ok = (0..d).all(|j| {
                    let sine = set.contains(&j) == (bc == BoundaryCondition::Absolute);
                    !sine || n[j] >= 1
                });
                let w = (0..d).map(|j| (n[j] as f64 * PI / lengths[j]).powi(2)).sum::<f64>().sqrt();
                if ok && w > 0.0 && w <= omega_max {
                    out.push(w);
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    fn expand(m: &ModeList) -> Vec<f64> {
        m.modes.iter().flat_map(|m| std::iter::repeat_n(m.omega, m.multiplicity as usize)).collect()
    }

    #[test]
    fn interval_examples() {
        let m = interval_spectrum(PI, BoundaryCondition::Relative, 3.5).unwrap();
        assert_eq!(omegas(&m), vec![(1.0, 1), (2.0, 1), (3.0, 1)]);
        let m = interval_spectrum(1.0, BoundaryCondition::Relative, 4.0).unwrap();
        assert_eq!(m.modes[0].omega, PI);
        let m = interval_spectrum(PI, BoundaryCondition::Absolute, 20.5).unwrap();
        assert_eq!(m.count_below(20.5), 20);
    }

    #[test]
    fn box_examples() {
        let m = box_pform_spectrum(&[1.0, 1.0], 0, BoundaryCondition::Relative, 10.0).unwrap();
        assert_relative_eq!(m.modes[0].omega, PI * 2f64.sqrt(), max_relative = 1e-15);
        let m = box_pform_spectrum(&[1.0, 1.0], 1, BoundaryCondition::Absolute, 10.0).unwrap();
        assert_relative_eq!(m.modes[0].omega, PI, max_relative = 1e-15);
        // (1,0) in component 1 and (0,1) in component 2
        assert_eq!(m.modes[0].multiplicity, 2);
        assert!(box_pform_spectrum(&[1.0], 2, BoundaryCondition::Absolute, 10.0).is_err());
    }

    #[test]
    fn box_matches_enumeration_oracle() {
        for lengths in [vec![1.0, 1.0], vec![1.0, 1.7], vec![1.0, 1.0, 1.0], vec![0.9, 1.3, 1.1]] {
            for p in 0..=lengths.len() {
                for bc in [BoundaryCondition::Absolute, BoundaryCondition::Relative] {
                    let got = expand(&box_pform_spectrum(&lengths, p, bc, 12.0).unwrap());
                    let want = box_oracle(&lengths, p, bc, 12.0);
                    assert_eq!(got.len(), want.len(), "{lengths:?} p={p} {bc}");
                    for (a, b) in got.iter().zip(&want) {
                        assert_relative_eq!(*a, *b, max_relative = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn em_box_is_difference() {
        let em = box_em_spectrum(&[1.0, 1.0, 1.0], BoundaryCondition::Absolute, 15.0).unwrap();
        let one = box_pform_spectrum(&[1.0, 1.0, 1.0], 1, BoundaryCondition::Absolute, 15.0).unwrap();
        let zero = box_pform_spectrum(&[1.0, 1.0, 1.0], 0, BoundaryCondition::Absolute, 15.0).unwrap();
        assert_eq!(expand(&em).len() + expand(&zero).len(), expand(&one).len());
    }

    #[test]
    fn degeneracies() {
        for l in 0..10 {
            assert_eq!(degeneracy(l, 3), 2 * l + 1);
            assert_eq!(degeneracy(l, 2), if l == 0 { 1 } else { 2 });
        }
        assert_eq!(degeneracy(1, 4), 4);
        // the closed form (2l+D−2)(l+D−3)!/(l!(D−2)!)
        for d in 3..8usize {
            for l in 1..12u64 {
                let fact = |n: u64| (1..=n).map(|k| k as f64).product::<f64>();
                let f = (2 * l + d as u64 - 2) as f64 * fact(l + d as u64 - 3) / (fact(l) * fact(d as u64 - 2));
                assert_eq!(degeneracy(l, d) as f64, f);
            }
        }
    }

    #[test]
    fn disk_lowest_modes() {
        let m = ball_scalar_spectrum(2, 1.0, BoundaryCondition::Relative, 6.0).unwrap();
        assert_relative_eq!(m.modes[0].omega, 2.404_825_557_695_773, max_relative = 1e-14);
        assert_eq!(m.modes[0].multiplicity, 1);
        assert_relative_eq!(m.modes[1].omega, 3.831_705_970_207_512, max_relative = 1e-13);
        assert_eq!(m.modes[1].multiplicity, 2);
        // Neumann: J1 zero for l = 0 and J0' … first nonzero mode is j'_{1,1} = 1.8411837813406593
        let m = ball_scalar_spectrum(2, 1.0, BoundaryCondition::Absolute, 4.0).unwrap();
        assert_relative_eq!(m.modes[0].omega, 1.841_183_781_340_659_3, max_relative = 1e-13);
        assert_relative_eq!(m.modes[2].omega, 3.831_705_970_207_512, max_relative = 1e-13);
    }

    #[test]
    fn three_ball_dirichlet_is_spherical_bessel() {
        // l = 0 in D = 3: ν = 1/2 and zeros at kπ
        let m = ball_scalar_spectrum(3, 1.0, BoundaryCondition::Relative, 10.0).unwrap();
        let singles: Vec<f64> = m.modes.iter().filter(|m| m.multiplicity == 1).map(|m| m.omega).collect();
        assert_relative_eq!(singles[0], PI, max_relative = 1e-14);
        assert_relative_eq!(singles[1], 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(singles[2], 3.0 * PI, max_relative = 1e-14);
    }

    #[test]
    fn ball_residuals() {
        let d = 3;
        for bc in [BoundaryCondition::Relative, BoundaryCondition::Absolute] {
            for l in 0..6u64 {
                let nu = l as f64 + 0.5;
                for z in ball_radial_zeros(d, l, bc, 30.0).unwrap() {
                    let (f, scale) = match bc {
                        BoundaryCondition::Relative => {
                            let v = bessel_jy(nu, z);
                            (v.j, v.jp.abs() * z)
                        }
                        BoundaryCondition::Absolute => {
                            let v = bessel_jy(nu, z);
                            (neumann_weight(d, nu, z).0, (v.j.abs() + v.jp.abs()) * z)
                        }
                    };
                    assert!(f.abs() <= 1e-12 * scale, "l={l} z={z} f={f}");
                }
            }
        }
    }

    #[test]
    fn annulus_sign_changes_and_thin_hole_limit() {
        let m = annulus_scalar_spectrum(2, 1.0, 2.0, BoundaryCondition::Relative, 12.0).unwrap();
        for mode in &m.modes {
            let z = mode.omega;
            let l_nu = |nu: f64| {
                let lo = annulus_radial_function(2, nu, 1.0, 2.0, BoundaryCondition::Relative, z * (1.0 - 1e-9));
                let hi = annulus_radial_function(2, nu, 1.0, 2.0, BoundaryCondition::Relative, z * (1.0 + 1e-9));
                lo * hi <= 0.0
            };
            assert!((0..20).any(|l| l_nu(l as f64)), "no sign change at {z}");
        }
        // a tiny hole barely moves the Neumann modes and the l ≥ 1 Dirichlet modes
        let disk = ball_scalar_spectrum(2, 1.0, BoundaryCondition::Absolute, 5.5).unwrap();
        let holed = annulus_scalar_spectrum(2, 1e-4, 1.0, BoundaryCondition::Absolute, 5.5).unwrap();
        for (a, b) in disk.modes.iter().zip(&holed.modes).take(3) {
            assert!((a.omega - b.omega).abs() < 1e-3, "{} vs {}", a.omega, b.omega);
        }
        for l in 1..3u64 {
            let zd = ball_radial_zeros(2, l, BoundaryCondition::Relative, 12.0).unwrap();
            let za = annulus_radial_zeros(2, l, 1e-4, 1.0, BoundaryCondition::Relative, 12.0).unwrap();
            for (a, b) in zd.iter().zip(&za).take(3) {
                assert!((a - b).abs() < 1e-3);
            }
        }
        // the l = 0 Dirichlet shift decays only logarithmically in the hole size
        let j01 = 2.404_825_557_695_773;
        let shift = |r: f64| annulus_radial_zeros(2, 0, r, 1.0, BoundaryCondition::Relative, 4.0).unwrap()[0] - j01;
        assert!(shift(1e-4) > 0.0 && shift(1e-6) < shift(1e-4) && shift(1e-4) < shift(1e-2));
    }

    #[test]
    fn annulus_weyl_count() {
        let (a, b) = (1.0, 2.0);
        let area = PI * (b * b - a * a);
        let mut ratios = Vec::new();
        let m = annulus_scalar_spectrum(2, a, b, BoundaryCondition::Relative, 40.0).unwrap();
        for w in [10.0, 20.0, 40.0] {
            let n = m.count_below(w) as f64;
            ratios.push(n / (area * w * w / (4.0 * PI)));
        }
        assert!((ratios[2] - 1.0).abs() < (ratios[0] - 1.0).abs());
        assert!((ratios[2] - 1.0).abs() < 0.1);
    }

    #[test]
    fn tail_bound_dominates_true_tail() {
        let m = interval_spectrum(PI, BoundaryCondition::Relative, 100.0).unwrap();
        let t = 0.01;
        let truth: f64 = (101..2000).map(|n| (-(t * (n * n) as f64)).exp()).sum();
        let bound = heat_tail_bound(&m, t).unwrap();
        assert!(bound >= truth && bound < 1e-30, "{bound} vs {truth}");
        let mut prev = f64::INFINITY;
        for t in [0.001, 0.01, 0.1, 1.0, 10.0] {
            let b = heat_tail_bound(&m, t).unwrap();
            assert!(b <= prev);
            prev = b;
        }
        assert!(heat_tail_bound(&m, 1e4).unwrap() == 0.0);
        let bigger = interval_spectrum(PI, BoundaryCondition::Relative, 200.0).unwrap();
        assert!(heat_tail_bound(&bigger, 0.001).unwrap() <= heat_tail_bound(&m, 0.001).unwrap());
        let mut bare = m.clone();
        bare.tail = None;
        assert_eq!(heat_tail_bound(&bare, t), Err(Error::BoundUnavailable));
    }

    #[test]
    fn weyl_ratio_box() {
        let m = box_pform_spectrum(&[1.0, 1.3], 0, BoundaryCondition::Relative, 200.0).unwrap();
        let area = 1.3;
        let r = |w: f64| m.count_below(w) as f64 / (area * w * w / (4.0 * PI));
        assert!((r(200.0) - 1.0).abs() < (r(50.0) - 1.0).abs());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn hodge_duality(l1 in 0.5f64..2.0, l2 in 0.5f64..2.0, l3 in 0.5f64..2.0, p in 0usize..4) {
            let lengths = [l1, l2, l3];
            let rel = box_pform_spectrum(&lengths, p, BoundaryCondition::Relative, 9.0).unwrap();
            let abs = box_pform_spectrum(&lengths, 3 - p, BoundaryCondition::Absolute, 9.0).unwrap();
            prop_assert_eq!(rel.modes, abs.modes);
        }

        #[test]
        fn scaling_maps_frequencies(l1 in 0.5f64..2.0, l2 in 0.5f64..2.0, r in 0.5f64..3.0) {
            let m = box_pform_spectrum(&[l1, l2], 0, BoundaryCondition::Relative, 15.0).unwrap();
            let s = box_pform_spectrum(&[l1 * r, l2 * r], 0, BoundaryCondition::Relative, 15.0 / r).unwrap();
            prop_assert_eq!(m.len(), s.len());
            for (a, b) in m.modes.iter().zip(&s.modes) {
                prop_assert!((a.omega / r - b.omega).abs() <= 1e-12 * b.omega);
                prop_assert_eq!(a.multiplicity, b.multiplicity);
            }
        }
    }
}
