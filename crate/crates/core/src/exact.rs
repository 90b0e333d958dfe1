//! Exact numbers of the form Σ_k q_k (√π)^k with rational q_k.
//!
//! Every closed-form measure and heat coefficient in this crate lives in this
//! ring, so cancellation identities can be checked as exact zeros.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Exact {
    // power of √π → coefficient; zero coefficients are never stored
    terms: BTreeMap<i32, BigRational>,
}

impl Exact {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational(q: BigRational) -> Self {
        Self::monomial(q, 0)
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// q · (√π)^k
    pub fn monomial(q: BigRational, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(k, q);
        }
        Self { terms }
    }

    /// π^{k/2}
    pub fn sqrt_pi_pow(k: i32) -> Self {
        Self::monomial(BigRational::one(), k)
    }

    /// The exact binary value of a finite float.
    pub fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .map(Self::rational)
            .ok_or_else(|| Error::Numerical(format!("{x} is not a finite number")))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational coefficient of (√π)^k.
    pub fn coefficient(&self, k: i32) -> BigRational {
        self.terms.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(&k, c)| (k, c * q)).collect() }
    }

    pub fn to_f64(&self) -> f64 {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        self.terms
            .iter()
            .map(|(&k, q)| q.to_f64().unwrap_or(f64::NAN) * sqrt_pi.powi(k))
            .sum()
    }

    fn insert(&mut self, k: i32, q: BigRational) {
        let entry = self.terms.entry(k).or_insert_with(BigRational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }
}

impl Add for &Exact {
    type Output = Exact;
    fn add(self, rhs: &Exact) -> Exact {
        let mut out = self.clone();
        for (&k, q) in &rhs.terms {
            out.insert(k, q.clone());
        }
        out
    }
}

impl Sub for &Exact {
    type Output = Exact;
    fn sub(self, rhs: &Exact) -> Exact {
        self + &(-rhs)
    }
}

impl Neg for &Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact { terms: self.terms.iter().map(|(&k, q)| (k, -q)).collect() }
    }
}

impl Mul for &Exact {
    type Output = Exact;
    fn mul(self, rhs: &Exact) -> Exact {
        let mut out = Exact::zero();
        for (&i, a) in &self.terms {
            for (&j, b) in &rhs.terms {
                out.insert(i + j, a * b);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Exact {
            type Output = Exact;
            fn $m(self, rhs: Exact) -> Exact {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Exact> for Exact {
            type Output = Exact;
            fn $m(self, rhs: &Exact) -> Exact {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        -&self
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&k, q)) in self.terms.iter().enumerate() {
            let sign = if q.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            write!(f, "{}", q.abs())?;
            match k {
                0 => {}
                2 => write!(f, "·π")?,
                k if k % 2 == 0 && k > 0 => write!(f, "·π^{}", k / 2)?,
                k if k % 2 == 0 => write!(f, "·π^({})", k / 2)?,
                k => write!(f, "·π^({k}/2)")?,
            }
        }
        Ok(())
    }
}
