//! Exact rationals and the extended half-line `[0, +inf]`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Arbitrary-precision rational; every scalar in the crate is one of these.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rvec(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| format!("bad numerator in {s:?}"))?;
    let d = BigInt::from_str(d).map_err(|_| format!("bad denominator in {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(n, d))
}

/// Canonical text form: always `num/den`, reduced, positive denominator.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// A nonnegative rational or `+inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Finite(Rational),
    Infinity,
}

impl ExtRat {
    pub fn finite(q: Rational) -> Result<Self, Error> {
        if q.is_negative() {
            return Err(Error::Domain(format!("negative value {q} in [0, inf]")));
        }
        Ok(ExtRat::Finite(q))
    }

    pub fn zero() -> Self {
        ExtRat::Finite(Rational::zero())
    }

    pub fn from_int(n: u64) -> Self {
        ExtRat::Finite(Rational::from_integer(BigInt::from(n)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRat::Finite(q) if q.is_zero())
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtRat::Finite(q) => Some(q),
            ExtRat::Infinity => None,
        }
    }

    /// Multiplication by a strictly positive scalar.
    pub fn scale(&self, alpha: &Rational) -> Result<Self, Error> {
        if !alpha.is_positive() {
            return Err(Error::Domain(format!(
                "cone scalars must be strictly positive, got {alpha}"
            )));
        }
        Ok(match self {
            ExtRat::Finite(q) => ExtRat::Finite(q * alpha),
            ExtRat::Infinity => ExtRat::Infinity,
        })
    }

    /// `k * self` for an integer multiplicity, with `0 * inf = 0`.
    pub fn times_count(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return ExtRat::zero();
        }
        match self {
            ExtRat::Finite(q) => ExtRat::Finite(q * Rational::from_integer(k.clone())),
            ExtRat::Infinity => ExtRat::Infinity,
        }
    }

    pub fn min(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl Add for &ExtRat {
    type Output = ExtRat;

    fn add(self, rhs: &ExtRat) -> ExtRat {
        match (self, rhs) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a + b),
            _ => ExtRat::Infinity,
        }
    }
}

impl Add for ExtRat {
    type Output = ExtRat;

    fn add(self, rhs: ExtRat) -> ExtRat {
        &self + &rhs
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => a.cmp(b),
            (ExtRat::Finite(_), ExtRat::Infinity) => Ordering::Less,
            (ExtRat::Infinity, ExtRat::Finite(_)) => Ordering::Greater,
            (ExtRat::Infinity, ExtRat::Infinity) => Ordering::Equal,
        }
    }
}

impl From<Rational> for ExtRat {
    /// Panics on negative input; use [`ExtRat::finite`] for untrusted values.
    fn from(q: Rational) -> Self {
        assert!(!q.is_negative(), "negative extended rational");
        ExtRat::Finite(q)
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Finite(q) => write!(f, "{}", format_rational(q)),
            ExtRat::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtRat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim() == "inf" {
            return Ok(ExtRat::Infinity);
        }
        let q = parse_rational(s)?;
        if q.is_negative() {
            return Err(format!("negative value {s:?}"));
        }
        Ok(ExtRat::Finite(q))
    }
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}
