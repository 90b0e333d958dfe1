//! Closed-form heat-kernel coefficients for p-forms, the electromagnetic
//! field and shell combinations.
//!
//! The heat trace of a field is K(t) ~ Σ_n c_n t^{(n−D)/2}. For the
//! electromagnetic field c_n = a_n(Δ_1) − a_n(Δ_0).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::geometry::{Corners, Geometry, Measures, ShellConfiguration};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    /// Neumann for functions; an infinitely permeable wall for one-forms
    Absolute,
    /// Dirichlet for functions; a perfectly conducting wall for one-forms
    Relative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhysicalBoundary {
    PerfectlyConducting,
    InfinitelyPermeable,
}

pub fn bc_map(physical: PhysicalBoundary) -> BoundaryCondition {
    match physical {
        PhysicalBoundary::PerfectlyConducting => BoundaryCondition::Relative,
        PhysicalBoundary::InfinitelyPermeable => BoundaryCondition::Absolute,
    }
}

impl BoundaryCondition {
    pub fn physical(self) -> PhysicalBoundary {
        match self {
            Self::Relative => PhysicalBoundary::PerfectlyConducting,
            Self::Absolute => PhysicalBoundary::InfinitelyPermeable,
        }
    }

    pub fn scalar_name(self) -> &'static str {
        match self {
            Self::Absolute => "Neumann",
            Self::Relative => "Dirichlet",
        }
    }

    pub fn other(self) -> Self {
        match self {
            Self::Absolute => Self::Relative,
            Self::Relative => Self::Absolute,
        }
    }

    /// Accepts the form label, the physical alias or the scalar alias.
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "absolute" | "neumann" | "infinitely-permeable" => Ok(Self::Absolute),
            "relative" | "dirichlet" | "perfectly-conducting" => Ok(Self::Relative),
            other => Err(Error::Unsupported(format!("unknown boundary condition '{other}'"))),
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Absolute => "absolute",
            Self::Relative => "relative",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    Scalar,
    PForm(usize),
    Electromagnetic,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Scalar => write!(f, "scalar"),
            Self::PForm(p) => write!(f, "{p}-form"),
            Self::Electromagnetic => write!(f, "electromagnetic"),
        }
    }
}

/// Binomial coefficient D!/(p!(D−p)!), zero for p < 0, p > D or D < 0.
pub fn h(d: i64, p: i64) -> i64 {
    if d < 0 || p < 0 || p > d {
        return 0;
    }
    let k = p.min(d - p);
    (0..k).fold(1i64, |acc, i| acc * (d - i) / (i + 1))
}

pub fn h0(d: i64, p: i64) -> i64 {
    h(d, p) - 6 * h(d - 2, p - 1)
}

pub fn d0(d: i64, p: i64) -> i64 {
    h(d - 1, p) - h(d - 1, p - 1)
}

/// (4π)^{−k/2} = 2^{−k} (√π)^{−k}
fn inv_four_pi_half(k: i64) -> Exact {
    let two_k = if k >= 0 {
        BigRational::new(BigInt::one(), BigInt::one() << k as usize)
    } else {
        BigRational::from_integer(BigInt::one() << (-k) as usize)
    };
    Exact::monomial(two_k, -k as i32)
}

fn check_order(n: usize) -> Result<()> {
    if n > 2 {
        return Err(Error::Unsupported(format!("no closed form for heat coefficient n = {n}")));
    }
    Ok(())
}

fn check_corners(m: &Measures, n: usize) -> Result<()> {
    if n == 2 && m.corners == Corners::Present {
        return Err(Error::CornerContribution);
    }
    Ok(())
}

/// a_n(Δ_{p;bc}) for n ∈ {0, 1, 2}.
pub fn a_n_measures(m: &Measures, p: i64, bc: BoundaryCondition, n: usize) -> Result<Exact> {
    let d = m.dim as i64;
    if p < 0 || p > d {
        return Err(Error::FormDegree { p, dim: m.dim });
    }
    check_order(n)?;
    check_corners(m, n)?;
    if bc == BoundaryCondition::Relative {
        return a_n_measures(m, d - p, BoundaryCondition::Absolute, n);
    }
    Ok(match n {
        0 => Exact::integer(h(d, p)) * inv_four_pi_half(d) * &m.vol_m,
        1 => Exact::ratio(d0(d, p), 4) * inv_four_pi_half(d - 1) * &m.vol_b,
        _ => {
            let bracket = &m.int_tau + &(Exact::integer(2) * &m.int_tr_l);
            Exact::ratio(h0(d, p), 6) * inv_four_pi_half(d) * bracket
        }
    })
}

pub fn a_n_pform(g: &Geometry, p: i64, bc: BoundaryCondition, n: usize) -> Result<Exact> {
    a_n_measures(&g.measures(), p, bc, n)
}

/// Electromagnetic c_n from the closed forms with the (D−1), (D−3), (D−7)
/// prefactors.
pub fn c_n_em_measures(m: &Measures, bc: BoundaryCondition, n: usize) -> Result<Exact> {
    check_order(n)?;
    check_corners(m, n)?;
    let d = m.dim as i64;
    Ok(match n {
        0 => Exact::integer(d - 1) * inv_four_pi_half(d) * &m.vol_m,
        1 => {
            let sign = if bc == BoundaryCondition::Absolute { 1 } else { -1 };
            Exact::ratio(sign * (d - 3), 4) * inv_four_pi_half(d - 1) * &m.vol_b
        }
        _ => {
            if d == 1 && !(m.int_tau.is_zero() && m.int_tr_l.is_zero()) {
                return Err(Error::InvalidGeometry("one-dimensional region with curvature".into()));
            }
            let bracket = &m.int_tau + &(Exact::integer(2) * &m.int_tr_l);
            // in one dimension h0(1,1) − h0(1,0) = 0 and the bracket vanishes anyway
            Exact::ratio(d - 7, 6) * inv_four_pi_half(d) * bracket
        }
    })
}

pub fn c_n_em(g: &Geometry, bc: BoundaryCondition, n: usize) -> Result<Exact> {
    c_n_em_measures(&g.measures(), bc, n)
}

/// Closed-form coefficient for any supported field kind.
pub fn field_coefficient(m: &Measures, field: FieldKind, bc: BoundaryCondition, n: usize) -> Result<Exact> {
    match field {
        FieldKind::Scalar => a_n_measures(m, 0, bc, n),
        FieldKind::PForm(p) => a_n_measures(m, p as i64, bc, n),
        FieldKind::Electromagnetic => c_n_em_measures(m, bc, n),
    }
}

/// ĉ_n = c_n(M) + c_n(A_r) − c_n(M_r) for the given field.
pub fn shell_c_hat_field(
    c: &ShellConfiguration,
    field: FieldKind,
    bc: BoundaryCondition,
    n: usize,
) -> Result<Exact> {
    let regions = c.regions()?;
    let inner = field_coefficient(&regions.inner.measures(), field, bc, n)?;
    let annulus = field_coefficient(&regions.annulus.measures(), field, bc, n)?;
    let outer = field_coefficient(&regions.outer.measures(), field, bc, n)?;
    Ok(inner + annulus - outer)
}

/// Electromagnetic ĉ_n by region subtraction.
pub fn shell_c_hat(c: &ShellConfiguration, bc: BoundaryCondition, n: usize) -> Result<Exact> {
    shell_c_hat_field(c, FieldKind::Electromagnetic, bc, n)
}

/// ±(D−3)/(2(4π)^{(D−1)/2}) vol(B).
pub fn shell_c1_closed_form(inner: &Geometry, bc: BoundaryCondition) -> Exact {
    let m = inner.measures();
    let d = m.dim as i64;
    let sign = if bc == BoundaryCondition::Absolute { 1 } else { -1 };
    Exact::ratio(sign * (d - 3), 2) * inv_four_pi_half(d - 1) * &m.vol_b
}

/// Heat coefficients c_0..c_D of a p-form on a box, exact up to exponentially
/// small terms and including edge and corner contributions.
///
/// Each direction contributes a one-dimensional theta factor
/// L/(2√(πt)) ∓ 1/2 (sine/cosine), and zero modes are removed. All c_n with
/// n > D vanish.
pub fn box_heat_coefficients(lengths: &[f64], p: usize, bc: BoundaryCondition) -> Result<Vec<Exact>> {
    let d = lengths.len();
    if p > d {
        return Err(Error::FormDegree { p: p as i64, dim: d });
    }
    let halves: Vec<Exact> = lengths
        .iter()
        .map(|&l| Exact::from_f64(l).map(|q| q * Exact::ratio(1, 2) * Exact::sqrt_pi_pow(-1)))
        .collect::<Result<_>>()?;
    let mut total = vec![Exact::zero(); d + 1];
    for set in subsets(d, p) {
        // poly[k] multiplies t^{(k−D)/2}
        let mut poly = vec![Exact::one()];
        for (j, a) in halves.iter().enumerate() {
            let sine = set.contains(&j) == (bc == BoundaryCondition::Absolute);
            let b = if sine { Exact::ratio(-1, 2) } else { Exact::ratio(1, 2) };
            let mut next = vec![Exact::zero(); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k] = &next[k] + &(c * a);
                next[k + 1] = &next[k + 1] + &(c * &b);
            }
            poly = next;
        }
        for (k, c) in poly.into_iter().enumerate() {
            total[k] = &total[k] + &c;
        }
    }
    let zero_modes = match bc {
        BoundaryCondition::Absolute => p == 0,
        BoundaryCondition::Relative => p == d,
    };
    if zero_modes {
        total[d] = &total[d] - &Exact::one();
    }
    Ok(total)
}

/// Net number of zero modes of a field on a contractible region: harmonic
/// p-forms exist only for (absolute, p = 0) and (relative, p = D).
pub fn ball_zero_modes(d: usize, field: FieldKind, bc: BoundaryCondition) -> i64 {
    let pform = |p: usize| match bc {
        BoundaryCondition::Absolute => i64::from(p == 0),
        BoundaryCondition::Relative => i64::from(p == d),
    };
    match field {
        FieldKind::Scalar => pform(0),
        FieldKind::PForm(p) => pform(p),
        FieldKind::Electromagnetic => pform(1) - pform(0),
    }
}

/// All p-element subsets of {0..d}, in lexicographic order.
pub fn subsets(d: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for j in start..d {
            cur.push(j);
            rec(j + 1, d, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, p, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "kebab-case")]
pub enum CoefficientSource {
    ClosedForm(String),
    ThetaProduct,
    Extracted,
    Supplied,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coefficient {
    pub value: f64,
    pub uncertainty: f64,
    pub source: CoefficientSource,
}

/// Heat coefficients c_0..c_N of one field on one region.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientSet {
    pub dim: usize,
    pub field: FieldKind,
    pub bc: BoundaryCondition,
    pub values: BTreeMap<usize, Coefficient>,
}

impl CoefficientSet {
    pub fn new(dim: usize, field: FieldKind, bc: BoundaryCondition) -> Self {
        Self { dim, field, bc, values: BTreeMap::new() }
    }

    /// Closed-form coefficients of a geometry. Boxes and intervals use the
    /// theta-function product, which is exact for all n; other shapes get
    /// n = 0, 1, 2 where available.
    pub fn closed_form(g: &Geometry, field: FieldKind, bc: BoundaryCondition) -> Result<Self> {
        let d = g.dim();
        let mut set = Self::new(d, field, bc);
        if let Some(lengths) = g.side_lengths() {
            let coeffs = match field {
                FieldKind::Scalar => box_heat_coefficients(&lengths, 0, bc)?,
                FieldKind::PForm(p) => box_heat_coefficients(&lengths, p, bc)?,
                FieldKind::Electromagnetic => {
                    let one = box_heat_coefficients(&lengths, 1, bc)?;
                    let zero = box_heat_coefficients(&lengths, 0, bc)?;
                    one.iter().zip(&zero).map(|(a, b)| a - b).collect()
                }
            };
            for n in 0..=d + 3 {
                let value = coeffs.get(n).map_or(0.0, Exact::to_f64);
                set.insert(n, value, 0.0, CoefficientSource::ThetaProduct);
            }
            return Ok(set);
        }
        let m = g.measures();
        for n in 0..=2 {
            let c = field_coefficient(&m, field, bc, n)?;
            set.insert(n, c.to_f64(), 0.0, CoefficientSource::ClosedForm(c.to_string()));
        }
        // mode lists never contain ω = 0, so the constant term must not count it
        if matches!(g, Geometry::Ball { .. }) && d <= 2 {
            if let Some(c) = set.values.get_mut(&d) {
                c.value -= ball_zero_modes(d, field, bc) as f64;
            }
        }
        Ok(set)
    }

    pub fn insert(&mut self, n: usize, value: f64, uncertainty: f64, source: CoefficientSource) {
        self.values.insert(n, Coefficient { value, uncertainty, source });
    }

    /// Fill in orders missing here from another set.
    pub fn fill_from(&mut self, other: &CoefficientSet) {
        for (&n, c) in &other.values {
            self.values.entry(n).or_insert_with(|| c.clone());
        }
    }

    pub fn get(&self, n: usize) -> Result<&Coefficient> {
        self.values.get(&n).ok_or(Error::Coverage(n))
    }

    pub fn value(&self, n: usize) -> Result<f64> {
        self.get(n).map(|c| c.value)
    }

    /// Largest N such that every c_n with n ≤ N is present.
    pub fn contiguous_order(&self) -> Option<usize> {
        let mut n = None;
        for k in 0.. {
            if !self.values.contains_key(&k) {
                break;
            }
            n = Some(k);
        }
        n
    }

    /// Coefficients on t^{(n−D)/2} after scaling every length by r.
    pub fn scaled(&self, r: f64) -> Self {
        let mut out = self.clone();
        for (&n, c) in out.values.iter_mut() {
            let f = r.powi(self.dim as i32 - n as i32);
            c.value *= f;
            c.uncertainty *= f;
        }
        out
    }
}
