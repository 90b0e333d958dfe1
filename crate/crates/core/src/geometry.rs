//! Cavity geometries and the measures entering the heat coefficients.
//!
//! Lengths are held as exact rationals (the binary value of the input float)
//! so that scaled copies and shell regions keep their measures exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::exact::Exact;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corners {
    None,
    /// edges and corners present; the smooth-boundary a_2 is rejected
    Present,
    /// edges and corners present, a_2 accepted anyway
    Overridden,
}

/// Volume, boundary volume and curvature integrals of a region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measures {
    pub dim: usize,
    pub vol_m: Exact,
    pub vol_b: Exact,
    /// ∫_M τ
    pub int_tau: Exact,
    /// ∫_{∂M} Σ_a L_aa, inward normal
    pub int_tr_l: Exact,
    pub corners: Corners,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Geometry {
    Interval { length: BigRational },
    Box { lengths: Vec<BigRational>, corner_override: bool },
    Ball { dim: usize, radius: BigRational },
    Generic(Measures),
}

fn positive_length(x: f64, what: &str) -> Result<BigRational> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::InvalidGeometry(format!("{what} must be positive and finite, got {x}")));
    }
    Ok(BigRational::from_float(x).expect("finite"))
}

fn exact_nonnegative(x: f64, what: &str) -> Result<Exact> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::InvalidGeometry(format!("{what} must be non-negative and finite, got {x}")));
    }
    Exact::from_f64(x)
}

fn rational_pow(q: &BigRational, n: i32) -> BigRational {
    if n >= 0 {
        num_traits::pow(q.clone(), n as usize)
    } else {
        num_traits::pow(q.recip(), (-n) as usize)
    }
}

impl Geometry {
    pub fn interval(length: f64) -> Result<Self> {
        Ok(Self::Interval { length: positive_length(length, "interval length")? })
    }

    pub fn cuboid(lengths: &[f64]) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::InvalidGeometry("box needs at least one side length".into()));
        }
        let lengths = lengths.iter().map(|&l| positive_length(l, "box side")).collect::<Result<_>>()?;
        Ok(Self::Box { lengths, corner_override: false })
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGeometry("ball dimension must be at least 1".into()));
        }
        Ok(Self::Ball { dim, radius: positive_length(radius, "ball radius")? })
    }

    pub fn generic(dim: usize, vol_m: f64, vol_b: f64, int_tau: f64, int_tr_l: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGeometry("dimension must be at least 1".into()));
        }
        if !(int_tau.is_finite() && int_tr_l.is_finite()) {
            return Err(Error::InvalidGeometry("curvature integrals must be finite".into()));
        }
        let m = Measures {
            dim,
            vol_m: exact_nonnegative(vol_m, "volume")?,
            vol_b: exact_nonnegative(vol_b, "boundary volume")?,
            int_tau: Exact::from_f64(int_tau)?,
            int_tr_l: Exact::from_f64(int_tr_l)?,
            corners: Corners::None,
        };
        Self::from_measures(m)
    }

    /// A Generic geometry; in one dimension the curvature integrals must vanish.
    pub fn from_measures(m: Measures) -> Result<Self> {
        if m.dim == 1 && !(m.int_tau.is_zero() && m.int_tr_l.is_zero()) {
            return Err(Error::InvalidGeometry("a one-dimensional region carries no curvature".into()));
        }
        Ok(Self::Generic(m))
    }

    /// Accept the smooth-boundary a_2 formula on a box.
    pub fn with_corner_override(self) -> Self {
        match self {
            Self::Box { lengths, .. } => Self::Box { lengths, corner_override: true },
            Self::Generic(mut m) if m.corners == Corners::Present => {
                m.corners = Corners::Overridden;
                Self::Generic(m)
            }
            g => g,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Interval { .. } => 1,
            Self::Box { lengths, .. } => lengths.len(),
            Self::Ball { dim, .. } => *dim,
            Self::Generic(m) => m.dim,
        }
    }

    /// Side lengths as floats (Interval and Box only).
    pub fn side_lengths(&self) -> Option<Vec<f64>> {
        match self {
            Self::Interval { length } => Some(vec![length.to_f64().unwrap()]),
            Self::Box { lengths, .. } => Some(lengths.iter().map(|l| l.to_f64().unwrap()).collect()),
            _ => None,
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match self {
            Self::Ball { radius, .. } => radius.to_f64(),
            _ => None,
        }
    }

    pub fn measures(&self) -> Measures {
        match self {
            Self::Interval { length } => Measures {
                dim: 1,
                vol_m: Exact::rational(length.clone()),
                vol_b: Exact::integer(2),
                int_tau: Exact::zero(),
                int_tr_l: Exact::zero(),
                corners: Corners::None,
            },
            Self::Box { lengths, corner_override } => {
                let d = lengths.len();
                let vol: BigRational = lengths.iter().product();
                // each face pair contributes 2 Π_{k≠j} L_k
                let area: BigRational = lengths.iter().map(|l| &vol / l * BigInt::from(2)).sum();
                let corners = match (d, corner_override) {
                    (1, _) => Corners::None,
                    (_, true) => Corners::Overridden,
                    _ => Corners::Present,
                };
                Measures {
                    dim: d,
                    vol_m: Exact::rational(vol),
                    vol_b: Exact::rational(area),
                    int_tau: Exact::zero(),
                    int_tr_l: Exact::zero(),
                    corners,
                }
            }
            Self::Ball { dim, radius } => {
                let d = *dim;
                let vol_m = unit_ball_volume(d) * Exact::rational(rational_pow(radius, d as i32));
                let vol_b = vol_m.scale(&(BigRational::from_integer(BigInt::from(d)) / radius));
                let int_tr_l = vol_b.scale(&(BigRational::from_integer(BigInt::from(d - 1)) / radius));
                Measures { dim: d, vol_m, vol_b, int_tau: Exact::zero(), int_tr_l, corners: Corners::None }
            }
            Self::Generic(m) => m.clone(),
        }
    }

    /// Multiply every length by r.
    pub fn scale(&self, r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidScale(r));
        }
        let q = BigRational::from_float(r).expect("finite");
        Ok(match self {
            Self::Interval { length } => Self::Interval { length: length * &q },
            Self::Box { lengths, corner_override } => {
                Self::Box { lengths: lengths.iter().map(|l| l * &q).collect(), corner_override: *corner_override }
            }
            Self::Ball { dim, radius } => Self::Ball { dim: *dim, radius: radius * &q },
            Self::Generic(m) => Self::Generic(scale_measures(m, &q)),
        })
    }
}

/// π^{D/2}/Γ(D/2 + 1) in exact form.
pub fn unit_ball_volume(d: usize) -> Exact {
    let m = d / 2;
    if d.is_multiple_of(2) {
        let fact: BigInt = (1..=m).map(BigInt::from).product();
        Exact::monomial(BigRational::new(BigInt::one(), fact), d as i32)
    } else {
        // Γ(m + 3/2) = (2m+1)!! √π / 2^{m+1}
        let dfact: BigInt = (0..=m).map(|k| BigInt::from(2 * k + 1)).product();
        let pow2 = BigInt::one() << (m + 1);
        Exact::monomial(BigRational::new(pow2, dfact), d as i32 - 1)
    }
}

fn scale_measures(m: &Measures, q: &BigRational) -> Measures {
    let d = m.dim as i32;
    Measures {
        dim: m.dim,
        vol_m: m.vol_m.scale(&rational_pow(q, d)),
        vol_b: m.vol_b.scale(&rational_pow(q, d - 1)),
        int_tau: m.int_tau.scale(&rational_pow(q, d - 2)),
        int_tr_l: m.int_tr_l.scale(&rational_pow(q, d - 2)),
        corners: m.corners,
    }
}

/// A cavity M enclosed by its scaled copy M_r.
#[derive(Clone, Debug, PartialEq)]
pub struct ShellConfiguration {
    pub inner: Geometry,
    pub scale: f64,
}

/// The three regions of a shell: M, the annular region A_r, and M_r.
#[derive(Clone, Debug, PartialEq)]
pub struct ShellRegions {
    pub inner: Geometry,
    pub annulus: Geometry,
    pub outer: Geometry,
}

impl ShellConfiguration {
    pub fn new(inner: Geometry, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 1.0) {
            return Err(Error::DegenerateShell(scale));
        }
        Ok(Self { inner, scale })
    }

    pub fn regions(&self) -> Result<ShellRegions> {
        shell_regions(self)
    }
}

pub fn shell_regions(c: &ShellConfiguration) -> Result<ShellRegions> {
    if !(c.scale.is_finite() && c.scale > 1.0) {
        return Err(Error::DegenerateShell(c.scale));
    }
    let outer = c.inner.scale(c.scale)?;
    let m = c.inner.measures();
    let mr = outer.measures();
    let annulus = Measures {
        dim: m.dim,
        vol_m: &mr.vol_m - &m.vol_m,
        vol_b: &m.vol_b + &mr.vol_b,
        int_tau: &mr.int_tau - &m.int_tau,
        // the annulus normal on B points away from M
        int_tr_l: &mr.int_tr_l - &m.int_tr_l,
        corners: m.corners,
    };
    Ok(ShellRegions { inner: c.inner.clone(), annulus: Geometry::Generic(annulus), outer })
}

impl Measures {
    pub fn vol_m_f64(&self) -> f64 {
        self.vol_m.to_f64()
    }

    pub fn vol_b_f64(&self) -> f64 {
        self.vol_b.to_f64()
    }
}
