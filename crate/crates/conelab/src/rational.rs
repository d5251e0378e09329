//! Exact nonnegative rationals extended with a top element `inf`.
//!
//! [`ExtRat`] is the value scale everything in this crate computes in:
//! weights, valuations, integrals and functionals all take values here, and
//! every identity the test suites assert is an exact equality of `ExtRat`s.
//! The arithmetic follows the measure-theoretic conventions
//!
//! * `a + inf = inf`,
//! * `a * inf = inf` for `a > 0`,
//! * `0 * inf = 0`.
//!
//! There is no subtraction; [`ExtRat::checked_sub`] exists for the few spots
//! (inversion, layer-cake thresholds) that subtract a smaller finite value
//! from a larger one.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A nonnegative rational number or infinity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Finite(BigRational),
    Infinity,
}

impl ExtRat {
    pub fn zero() -> Self {
        ExtRat::Finite(BigRational::zero())
    }

    pub fn one() -> Self {
        ExtRat::Finite(BigRational::one())
    }

    pub fn infinity() -> Self {
        ExtRat::Infinity
    }

    pub fn from_integer(n: u64) -> Self {
        ExtRat::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den` as an exact rational. Panics if `den == 0`.
    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        ExtRat::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRat::Finite(r) if r.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero()
    }

    /// `self - other` when both are finite and `other <= self`.
    pub fn checked_sub(&self, other: &ExtRat) -> Option<ExtRat> {
        match (self, other) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) if b <= a => Some(ExtRat::Finite(a - b)),
            _ => None,
        }
    }

    pub fn min(self, other: ExtRat) -> ExtRat {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: ExtRat) -> ExtRat {
        if self >= other {
            self
        } else {
            other
        }
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

impl Mul for &ExtRat {
    type Output = ExtRat;

    fn mul(self, rhs: &ExtRat) -> ExtRat {
        match (self, rhs) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a * b),
            // 0 * inf = 0 in either order.
            (a, ExtRat::Infinity) | (ExtRat::Infinity, a) => {
                if a.is_zero() {
                    ExtRat::zero()
                } else {
                    ExtRat::Infinity
                }
            }
        }
    }
}

impl Mul for ExtRat {
    type Output = ExtRat;

    fn mul(self, rhs: ExtRat) -> ExtRat {
        &self * &rhs
    }
}

impl Sum for ExtRat {
    fn sum<I: Iterator<Item = ExtRat>>(iter: I) -> ExtRat {
        iter.fold(ExtRat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExtRat> for ExtRat {
    fn sum<I: Iterator<Item = &'a ExtRat>>(iter: I) -> ExtRat {
        iter.fold(ExtRat::zero(), |acc, x| &acc + x)
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Finite(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            ExtRat::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExtRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::BadRational { text: s.into() };
        let s = s.trim();
        if s == "inf" {
            return Ok(ExtRat::Infinity);
        }
        let rational = match s.split_once('/') {
            Some((num, den)) => {
                let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
                let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                BigRational::new(num, den)
            }
            None => BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?),
        };
        if rational.is_negative() {
            return Err(bad());
        }
        Ok(ExtRat::Finite(rational))
    }
}

impl Serialize for ExtRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        // Accept either a string ("3/2", "1", "inf") or a bare integer.
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(n) => Ok(ExtRat::from_integer(n)),
            Raw::Text(s) => s.parse().map_err(|e: Error| D::Error::custom(e.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: u64, d: u64) -> ExtRat {
        ExtRat::ratio(n, d)
    }

    #[test]
    fn absorption_conventions() {
        let inf = ExtRat::infinity();
        assert_eq!(&rat(3, 2) + &inf, inf);
        assert_eq!(&rat(3, 2) * &inf, inf);
        assert_eq!(&ExtRat::zero() * &inf, ExtRat::zero());
        assert_eq!(&inf * &ExtRat::zero(), ExtRat::zero());
        assert_eq!(&inf * &inf, inf);
        assert_eq!(&inf + &inf, inf);
    }

    #[test]
    fn ordering_puts_infinity_on_top() {
        assert!(rat(1_000_000, 1) < ExtRat::infinity());
        assert!(rat(1, 3) < rat(1, 2));
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(1, 3).min(ExtRat::infinity()), rat(1, 3));
        assert_eq!(rat(1, 3).max(ExtRat::infinity()), ExtRat::infinity());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["0", "7", "3/2", "inf"] {
            let v: ExtRat = text.parse().unwrap();
            assert_eq!(v.to_string(), text);
        }
        assert_eq!("6/4".parse::<ExtRat>().unwrap().to_string(), "3/2");
        assert!("-1".parse::<ExtRat>().is_err());
        assert!("1/-2".parse::<ExtRat>().is_err());
        assert!("1/0".parse::<ExtRat>().is_err());
        assert!("nan".parse::<ExtRat>().is_err());
    }

    #[test]
    fn checked_sub_is_partial() {
        assert_eq!(rat(3, 2).checked_sub(&rat(1, 2)), Some(rat(1, 1)));
        assert_eq!(rat(1, 2).checked_sub(&rat(3, 2)), None);
        assert_eq!(ExtRat::infinity().checked_sub(&rat(1, 1)), None);
        assert_eq!(rat(1, 1).checked_sub(&ExtRat::infinity()), None);
    }

    fn ext_rat() -> impl Strategy<Value = ExtRat> {
        prop_oneof![
            8 => (0u64..60, 1u64..12).prop_map(|(n, d)| ExtRat::ratio(n, d)),
            1 => Just(ExtRat::Infinity),
        ]
    }

    proptest! {
        #[test]
        fn add_commutes(a in ext_rat(), b in ext_rat()) {
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn mul_distributes_over_add(a in ext_rat(), b in ext_rat(), c in ext_rat()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn mul_associates(a in ext_rat(), b in ext_rat(), c in ext_rat()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn serde_round_trip(a in ext_rat()) {
            let json = serde_json::to_string(&a).unwrap();
            let back: ExtRat = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(a, back);
        }
    }
}
