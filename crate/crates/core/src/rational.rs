//! Exact arbitrary-precision rational arithmetic.
//!
//! Every density, degree ratio and inequality verdict in this crate is
//! computed with [`Rat`]. Floating point appears nowhere in a
//! verdict-producing path; the only decimal output is a rendering computed
//! by integer long division.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number, always in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`. Panics if `den == 0`; fractions from untrusted input go
    /// through [`Rat::checked_ratio`].
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    pub fn big_ratio(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num, den))
    }

    pub fn checked_ratio(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(Rat(BigRational::new(num, den)))
        }
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

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn squared(&self) -> Self {
        Rat(&self.0 * &self.0)
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rat(self.0.pow(exp as i32))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
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

    /// Approximate value for logging and ordering heuristics only.
    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with `places` digits after the point, truncated
    /// toward zero. Computed by integer long division, so the string is
    /// identical on every platform.
    pub fn decimal_string(&self, places: usize) -> String {
        let sign = if self.0.is_negative() { "-" } else { "" };
        let num = self.0.numer().abs();
        let den = self.0.denom().clone();
        let int_part = &num / &den;
        let mut rem = &num % &den;
        let mut digits = String::with_capacity(places);
        for _ in 0..places {
            rem *= 10;
            let d = &rem / &den;
            rem = &rem % &den;
            digits.push(char::from(b'0' + d.to_u8().unwrap_or(0)));
        }
        if places == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{digits}")
        }
    }

    /// Human rendering: `p/q (≈ 0.dddddd)`, or just the integer when exact.
    pub fn human_string(&self) -> String {
        if self.is_integer() {
            format!("{}", self.0.numer())
        } else {
            format!("{} (≈ {})", self, self.decimal_string(6))
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<usize> for Rat {
    fn from(n: usize) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'b Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rat(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rat(&self.0 / &rhs.0)
    }
}

impl<'a> Div<&'a Rat> for Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rat(self.0 / &rhs.0)
    }
}

impl Div<Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rat(&self.0 / rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl PartialEq<i64> for Rat {
    fn eq(&self, other: &i64) -> bool {
        self == &Rat::from_int(*other)
    }
}

impl PartialOrd<i64> for Rat {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.partial_cmp(&Rat::from_int(*other))
    }
}

/// Wire form used for every rational in JSON output: numerator and
/// denominator as decimal strings (arbitrary precision survives any JSON
/// parser) plus a truncated decimal rendering for humans.
#[derive(Serialize, Deserialize)]
struct RatWire {
    num: String,
    den: String,
    decimal: String,
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RatWire {
            num: self.0.numer().to_string(),
            den: self.0.denom().to_string(),
            decimal: self.decimal_string(8),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = RatWire::deserialize(deserializer)?;
        let num: BigInt = wire.num.parse().map_err(D::Error::custom)?;
        let den: BigInt = wire.den.parse().map_err(D::Error::custom)?;
        Rat::checked_ratio(num, den).ok_or_else(|| D::Error::custom("zero denominator"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = Rat::ratio(-4, -8);
        assert_eq!(r, Rat::ratio(1, 2));
        assert_eq!(r.numer(), &BigInt::from(1));
        assert_eq!(r.denom(), &BigInt::from(2));
        let s = Rat::ratio(3, -9);
        assert!(s.is_negative());
        assert_eq!(s.denom(), &BigInt::from(3));
    }

    #[test]
    fn exact_arithmetic() {
        let third = Rat::ratio(1, 3);
        let sum = &third + &third + third.clone();
        assert_eq!(sum, Rat::one());
        assert_eq!(Rat::ratio(2, 8), Rat::ratio(1, 4));
        assert!(Rat::ratio(1, 3) > Rat::ratio(333, 1000));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Rat::ratio(1, 4).decimal_string(3), "0.250");
        assert_eq!(Rat::ratio(-1, 3).decimal_string(4), "-0.3333");
        assert_eq!(Rat::ratio(2071, 2209).decimal_string(6), "0.937528");
        assert_eq!(Rat::from_int(7).decimal_string(0), "7");
    }

    #[test]
    fn serde_round_trip() {
        let r = Rat::ratio(995007, 998001);
        let json = serde_json::to_string(&r).unwrap();
        let back: Rat = serde_json::from_str(&json).unwrap();
        assert_eq!(r, back);
        assert!(
            json.contains("\"num\"") && json.contains("\"den\"") && json.contains("\"decimal\"")
        );
    }
}
