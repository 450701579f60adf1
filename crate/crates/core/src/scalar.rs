//! Scalar types the exact engine is generic over.
//!
//! Cyclotomic arithmetic only needs a commutative ring, so [`Scalar`] is
//! implemented for machine and big integers as well as for rationals. Anything
//! that divides (distributions, Gaussian forms) asks for [`RationalField`].

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An exact commutative ring element with a lossless view as a rational.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    fn to_rational(&self) -> BigRational;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every scalar type represents small integers")
    }
}

/// A scalar that is a field of rationals (exact division).
pub trait RationalField: Scalar {
    /// Converts from a big rational; `None` when the value does not fit.
    fn from_rational(r: &BigRational) -> Option<Self>;
}

impl Scalar for i64 {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(*self))
    }
}

impl Scalar for i128 {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(*self))
    }
}

impl Scalar for BigInt {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }
}

impl Scalar for Ratio<i64> {
    fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl Scalar for Ratio<i128> {
    fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl Scalar for BigRational {
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
}

impl RationalField for Ratio<i64> {
    fn from_rational(r: &BigRational) -> Option<Self> {
        Some(Ratio::new(r.numer().to_i64()?, r.denom().to_i64()?))
    }
}

impl RationalField for Ratio<i128> {
    fn from_rational(r: &BigRational) -> Option<Self> {
        Some(Ratio::new(r.numer().to_i128()?, r.denom().to_i128()?))
    }
}

impl RationalField for BigRational {
    fn from_rational(r: &BigRational) -> Option<Self> {
        Some(r.clone())
    }
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, `p`, or a decimal-free integer string.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        let r = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(format_rational(&parse_rational("7").unwrap()), "7");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn small_ratio_conversions() {
        let r = parse_rational("5/7").unwrap();
        let small = Ratio::<i64>::from_rational(&r).unwrap();
        assert_eq!(small.to_rational(), r);
        assert_eq!(<i128 as Scalar>::from_int(-3).to_rational(), parse_rational("-3").unwrap());
    }
}
