//! Exact coefficient fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact field. Every value is kept in canonical form, so `==` is equality in the field.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const NAME: &'static str;
    const CHARACTERISTIC: u32;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// Parse an integer or `p/q` literal.
    fn parse_literal(s: &str) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// `(-1)^odd` as a field element.
    fn sign(odd: bool) -> Self {
        if odd {
            Self::one().neg()
        } else {
            Self::one()
        }
    }

    fn add_assign(&mut self, rhs: &Self) {
        *self = self.add(rhs);
    }
}

/// The field with two elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct F2(pub bool);

impl fmt::Display for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.0 { "1" } else { "0" })
    }
}

impl Field for F2 {
    const NAME: &'static str = "F2";
    const CHARACTERISTIC: u32 = 2;

    fn zero() -> Self {
        F2(false)
    }
    fn one() -> Self {
        F2(true)
    }
    fn from_i64(n: i64) -> Self {
        F2(n.rem_euclid(2) == 1)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn add(&self, rhs: &Self) -> Self {
        F2(self.0 ^ rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        F2(self.0 ^ rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        F2(self.0 & rhs.0)
    }
    fn neg(&self) -> Self {
        *self
    }
    fn inv(&self) -> Option<Self> {
        self.0.then_some(*self)
    }
    fn parse_literal(s: &str) -> Option<Self> {
        let q = Q::parse_literal(s)?;
        let (n, d) = (q.0.numer().clone(), q.0.denom().clone());
        let two = BigInt::from(2);
        if (&d % &two).is_zero() {
            return None;
        }
        Some(F2(!(&n % &two).is_zero()))
    }
    fn sign(_odd: bool) -> Self {
        F2(true)
    }
}

/// Rational numbers with arbitrary-precision numerator and denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Q(pub BigRational);

impl Q {
    pub fn new(n: i64, d: i64) -> Self {
        Q(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Field for Q {
    const NAME: &'static str = "Q";
    const CHARACTERISTIC: u32 = 0;

    fn zero() -> Self {
        Q(BigRational::zero())
    }
    fn one() -> Self {
        Q(BigRational::one())
    }
    fn from_i64(n: i64) -> Self {
        Q(BigRational::from_integer(BigInt::from(n)))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        Q(&self.0 + &rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Q(&self.0 - &rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Q(&self.0 * &rhs.0)
    }
    fn neg(&self) -> Self {
        Q(-&self.0)
    }
    fn inv(&self) -> Option<Self> {
        (!self.0.is_zero()).then(|| Q(self.0.recip()))
    }
    fn parse_literal(s: &str) -> Option<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n = BigInt::from_str(n).ok()?;
        let d = BigInt::from_str(d).ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q(BigRational::new(n, d)))
    }
}

impl Q {
    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_arithmetic_is_mod_two() {
        assert_eq!(F2::from_i64(2), F2::zero());
        assert_eq!(F2::from_i64(-3), F2::one());
        assert_eq!(F2::one().add(&F2::one()), F2::zero());
        assert_eq!(F2::zero().inv(), None);
        assert_eq!(F2::parse_literal("7"), Some(F2::one()));
        assert_eq!(F2::parse_literal("1/2"), None);
    }

    #[test]
    fn rationals_stay_reduced() {
        let a = Q::new(2, -4);
        assert_eq!(a.to_string(), "-1/2");
        assert_eq!(a.0.denom(), &BigInt::from(2));
        assert_eq!(a.inv().unwrap(), Q::from_i64(-2));
        assert_eq!(Q::parse_literal("6/4"), Some(Q::new(3, 2)));
        assert_eq!(Q::parse_literal("1/0"), None);
        assert!(Q::sign(true).add(&Q::one()).is_zero());
    }
}
