//! Minimal algebraic traits shared by the coefficient domains.
//!
//! Method names avoid the `std::ops` vocabulary so that both can be in scope.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational numbers: arbitrary-precision numerator, positive denominator, reduced.
pub type Rational = BigRational;

pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_int(n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

pub trait Field: Ring {
    fn inverse(&self) -> Result<Self>;

    fn divided_by(&self, other: &Self) -> Result<Self> {
        Ok(self.times(&other.inverse()?))
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

impl Field for Rational {
    fn inverse(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats as `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p`, or `p/q` (no spaces required, surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Converts an integral rational to `i64`, if it is one and fits.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Exact k-th root of a non-negative rational, if it is a perfect k-th power.
pub fn rational_nth_root(q: &Rational, k: u32) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().nth_root(k);
    let d = q.denom().nth_root(k);
    if num_traits::pow(n.clone(), k as usize) == *q.numer()
        && num_traits::pow(d.clone(), k as usize) == *q.denom()
    {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Splits a positive integer as `s^2 * n` with `n` squarefree; returns `(s, n)`.
pub fn square_part(mut v: BigInt) -> (BigInt, BigInt) {
    let mut s = BigInt::one();
    let mut n = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= v {
        let mut e = 0u32;
        while (&v % &p).is_zero() {
            v /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &p;
        }
        if e % 2 == 1 {
            n *= &p;
        }
        p += 1;
    }
    n *= v;
    (s, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing_and_formatting() {
        assert_eq!(parse_rational("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rational(" -4 "), Some(int(-4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(&rat(-3, 2)), "-3/2");
        assert_eq!(format_rational(&int(7)), "7");
    }

    #[test]
    fn nth_roots_and_square_parts() {
        assert_eq!(rational_nth_root(&rat(8, 27), 3), Some(rat(2, 3)));
        assert_eq!(rational_nth_root(&rat(2, 1), 2), None);
        assert_eq!(square_part(BigInt::from(72)), (BigInt::from(6), BigInt::from(2)));
        assert_eq!(square_part(BigInt::from(15)), (BigInt::from(1), BigInt::from(15)));
    }
}
