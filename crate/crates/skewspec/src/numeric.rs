//! Exact rational scalars and closed subintervals of [0, 1].
//!
//! Every scalar quantity in this crate is a [`Rational`]; nothing is ever
//! rounded, so all comparisons downstream are bit-exact. Values are
//! immutable after construction and safe to share across threads.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced, denominator always
/// positive. Compositions of fibre maps multiply slopes, so denominators
/// grow like (max denominator)^r; fixed-width arithmetic would overflow
/// around r = 20.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Canonical reduced rational p/q.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        Self::from_big(BigInt::from(p), BigInt::from(q))
    }

    /// Canonical reduced rational from big integers.
    pub fn from_big(p: BigInt, q: BigInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(p, q)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// 2^(-j), the metric value of a first disagreement at index j.
    pub fn pow2_neg(j: usize) -> Self {
        Rational(BigRational::new(BigInt::one(), BigInt::one() << j))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Largest integer <= self. Exact.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Floor as usize; None when negative or too large.
    pub fn floor_usize(&self) -> Option<usize> {
        self.floor_int().to_usize()
    }

    pub fn in_unit_range(&self) -> bool {
        !self.is_negative() && self.0 <= BigRational::one()
    }
}

impl fmt::Display for Rational {
    /// Always "p/q", denominator explicit even when 1, '-' on the
    /// numerator; this is the bit-exact textual form used in configs
    /// and reports.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses "p/q" or the integer shorthand "p".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config {
            line: 0,
            message: format!("malformed rational '{s}'"),
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                Rational::from_big(p, q)
            }
            None => {
                let p: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rational(BigRational::from_integer(p)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Closed subinterval of [0, 1]. Degenerate (lo = hi) intervals are
/// representable; operations that require nondegeneracy in the
/// "interval" sense check [`UnitInterval::is_degenerate`] themselves.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnitInterval {
    lo: Rational,
    hi: Rational,
}

impl UnitInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if !lo.in_unit_range() {
            return Err(Error::OutOfUnitRange(lo.to_string()));
        }
        if !hi.in_unit_range() {
            return Err(Error::OutOfUnitRange(hi.to_string()));
        }
        if lo > hi {
            return Err(Error::InvertedInterval(lo.to_string(), hi.to_string()));
        }
        Ok(UnitInterval { lo, hi })
    }

    pub fn point(x: Rational) -> Result<Self> {
        Self::new(x.clone(), x)
    }

    /// The whole phase interval [0, 1].
    pub fn full() -> Self {
        UnitInterval {
            lo: Rational::zero(),
            hi: Rational::one(),
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_full(&self) -> bool {
        self.lo.is_zero() && self.hi == Rational::one()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn interior_contains(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn contains_interval(&self, other: &UnitInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Exact intersection; `None` when disjoint. A shared endpoint gives
    /// a degenerate interval, not `None`.
    pub fn intersect(&self, other: &UnitInterval) -> Option<UnitInterval> {
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi <= other.hi { &self.hi } else { &other.hi };
        if lo <= hi {
            Some(UnitInterval {
                lo: lo.clone(),
                hi: hi.clone(),
            })
        } else {
            None
        }
    }

    /// Closed middle third, exact.
    pub fn middle_third(&self) -> UnitInterval {
        let third = self.length() / Rational::from_int(3);
        UnitInterval {
            lo: &self.lo + &third,
            hi: &self.hi - &third,
        }
    }

    /// Splits into `parts` equal closed pieces that tile the interval.
    pub fn subdivide(&self, parts: usize) -> Vec<UnitInterval> {
        assert!(parts >= 1);
        let step = self.length() / Rational::from_int(parts as i64);
        (0..parts)
            .map(|i| {
                let lo = &self.lo + &step * Rational::from_int(i as i64);
                let hi = if i + 1 == parts {
                    self.hi.clone()
                } else {
                    &self.lo + &step * Rational::from_int(i as i64 + 1)
                };
                UnitInterval { lo, hi }
            })
            .collect()
    }
}

impl fmt::Display for UnitInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for UnitInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Serialize for UnitInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        (self.lo.to_string(), self.hi.to_string()).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UnitInterval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let (lo, hi) = <(String, String)>::deserialize(deserializer)?;
        let lo: Rational = lo.parse().map_err(de::Error::custom)?;
        let hi: Rational = hi.parse().map_err(de::Error::custom)?;
        UnitInterval::new(lo, hi).map_err(de::Error::custom)
    }
}

/// Convenience constructor used throughout tests and examples.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p, q).expect("nonzero denominator")
}

/// Convenience interval constructor.
pub fn interval(lo: Rational, hi: Rational) -> UnitInterval {
    UnitInterval::new(lo, hi).expect("valid unit interval")
}
