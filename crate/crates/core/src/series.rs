//! Puiseux series in one variable: finitely many terms with rational exponents
//! and cyclotomic coefficients, together with an exactness marker.
//!
//! A truncated series knows every term with exponent `<= trunc`; nothing is
//! known above it. Operations propagate that bound conservatively.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::ring::{format_rational, Rational};

/// Valuation of a series: the least exponent with nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valuation {
    Finite(Rational),
    /// The exact zero series.
    Infinite,
    /// A truncated series with no known terms: the valuation exceeds the bound.
    AboveTrunc(Rational),
}

impl Valuation {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// A bound `b` with `valuation >= b` (or `> b` for `AboveTrunc`); `None` for the zero series.
    fn lower_bound(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(v) | Valuation::AboveTrunc(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{}", format_rational(v)),
            Valuation::Infinite => write!(f, "+inf"),
            Valuation::AboveTrunc(t) => write!(f, ">{}", format_rational(t)),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PuiseuxSeries {
    terms: Vec<(Rational, CycloNumber)>,
    trunc: Option<Rational>,
}

fn min_opt(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl PuiseuxSeries {
    /// Builds a series from arbitrary terms: sorts, merges equal exponents,
    /// drops zero coefficients and anything above `trunc`.
    pub fn new(mut terms: Vec<(Rational, CycloNumber)>, trunc: Option<Rational>) -> Self {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Rational, CycloNumber)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc = lc.add(&c),
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(e, c)| !c.is_zero() && trunc.as_ref().map_or(true, |t| e <= t));
        PuiseuxSeries { terms: merged, trunc }
    }

    pub fn exact(terms: Vec<(Rational, CycloNumber)>) -> Self {
        Self::new(terms, None)
    }

    pub fn zero() -> Self {
        PuiseuxSeries { terms: Vec::new(), trunc: None }
    }

    pub fn monomial(coeff: CycloNumber, exp: Rational) -> Self {
        Self::exact(vec![(exp, coeff)])
    }

    pub fn terms(&self) -> &[(Rational, CycloNumber)] {
        &self.terms
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    pub fn trunc(&self) -> Option<&Rational> {
        self.trunc.as_ref()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.trunc.is_none()
    }

    /// Coefficient at `exp`, or `None` when the exponent lies beyond the truncation bound.
    pub fn coeff(&self, exp: &Rational) -> Option<CycloNumber> {
        if self.trunc.as_ref().is_some_and(|t| exp > t) {
            return None;
        }
        Some(
            self.terms
                .iter()
                .find(|(e, _)| e == exp)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(|| CycloNumber::from_int(0)),
        )
    }

    pub fn valuation(&self) -> Valuation {
        match (self.terms.first(), &self.trunc) {
            (Some((e, _)), _) => Valuation::Finite(e.clone()),
            (None, None) => Valuation::Infinite,
            (None, Some(t)) => Valuation::AboveTrunc(t.clone()),
        }
    }

    pub fn leading_coeff(&self) -> Option<&CycloNumber> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Drops every term above `bound` and marks the series as truncated there.
    pub fn truncate(&self, bound: &Rational) -> Self {
        let trunc = min_opt(self.trunc.clone(), Some(bound.clone()));
        Self::new(self.terms.clone(), trunc)
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
            trunc: self.trunc.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = min_opt(self.trunc.clone(), other.trunc.clone());
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.terms[i].0.clone(), self.terms[i].1.add(&other.terms[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        Self::new(out, trunc)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero();
        }
        // Exponent e of the product is complete when every pair (i, j) with i + j = e
        // has both factors known: e <= val(a) + trunc(b) and e <= val(b) + trunc(a).
        let bound_a = self.trunc.as_ref().zip(other.valuation().lower_bound().cloned()).map(|(t, v)| t + v);
        let bound_b = other.trunc.as_ref().zip(self.valuation().lower_bound().cloned()).map(|(t, v)| t + v);
        let trunc = min_opt(bound_a, bound_b);
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if trunc.as_ref().is_some_and(|t| &e > t) {
                    continue;
                }
                out.push((e, ca.mul(cb)));
            }
        }
        Self::new(out, trunc)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::monomial(CycloNumber::from_int(1), Rational::zero());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        if c.is_zero() {
            return Self::new(Vec::new(), self.trunc.clone());
        }
        PuiseuxSeries {
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a.mul(c))).collect(),
            trunc: self.trunc.clone(),
        }
    }

    /// Multiplies by `t^shift`.
    pub fn shift(&self, shift: &Rational) -> Self {
        PuiseuxSeries {
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
            trunc: self.trunc.as_ref().map(|t| t + shift),
        }
    }

    /// Substitutes `t -> zeta_N^k * t`. Every exponent must be an integer.
    pub fn scale_variable(&self, n: u32, k: i64) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            if !e.is_integer() {
                return Err(Error::IncompatibleRamification {
                    ramification: n,
                    detail: format!("exponent {} is not an integer", format_rational(e)),
                });
            }
            let power = (e.numer() * k) % i64::from(n);
            let power: i64 = num_traits::ToPrimitive::to_i64(&power).unwrap_or(0);
            terms.push((e.clone(), c.mul(&CycloNumber::root_of_unity(n, power))));
        }
        Ok(PuiseuxSeries { terms, trunc: self.trunc.clone() })
    }

    /// Substitutes `t -> t^(p/q)`: every exponent and the truncation bound scale by `p/q`.
    pub fn reparameterize(&self, p: u32, q: u32) -> Self {
        assert!(p >= 1 && q >= 1, "reparameterization factors must be positive");
        let f = Rational::new(p.into(), q.into());
        PuiseuxSeries {
            terms: self.terms.iter().map(|(e, c)| (e * &f, c.clone())).collect(),
            trunc: self.trunc.as_ref().map(|t| t * &f),
        }
    }

    /// Least common denominator of the exponents (1 for the empty series).
    pub fn exponent_denominator(&self) -> u64 {
        use num_integer::Integer;
        let mut d = num_bigint::BigInt::one();
        for (e, _) in &self.terms {
            d = d.lcm(e.denom());
        }
        if let Some(t) = &self.trunc {
            d = d.lcm(t.denom());
        }
        num_traits::ToPrimitive::to_u64(&d).unwrap_or(u64::MAX)
    }

    /// Largest conductor among the coefficients.
    pub fn conductor(&self) -> u32 {
        use num_integer::Integer;
        self.terms.iter().fold(1, |acc, (_, c)| acc.lcm(&c.conductor()))
    }

    pub fn has_nonnegative_exponents(&self) -> bool {
        self.terms.iter().all(|(e, _)| !e.is_negative())
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let exp = format_rational(e);
            if e.is_zero() {
                write!(f, "({c})")?;
            } else if c == &CycloNumber::from_int(1) {
                write!(f, "t^{exp}")?;
            } else {
                write!(f, "({c})*t^{exp}")?;
            }
        }
        if let Some(t) = &self.trunc {
            write!(f, " + O(t^>{})", format_rational(t))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, rat};

    fn c(n: i64) -> CycloNumber {
        CycloNumber::from_int(n)
    }

    fn s(terms: &[(Rational, i64)]) -> PuiseuxSeries {
        PuiseuxSeries::exact(terms.iter().map(|(e, k)| (e.clone(), c(*k))).collect())
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(s(&[(int(3), 1), (int(5), -1)]).valuation(), Valuation::Finite(int(3)));
        assert_eq!(PuiseuxSeries::zero().valuation(), Valuation::Infinite);
        let a = s(&[(rat(3, 2), 2)]).sub(&s(&[(rat(3, 2), 1)]));
        assert_eq!(a.valuation(), Valuation::Finite(rat(3, 2)));
        let empty = PuiseuxSeries::new(vec![], Some(int(4)));
        assert_eq!(empty.valuation(), Valuation::AboveTrunc(int(4)));
    }

    #[test]
    fn arithmetic_examples() {
        let h = s(&[(rat(3, 2), 1)]);
        assert_eq!(h.mul(&h), s(&[(int(3), 1)]));
        let t = s(&[(int(1), 1)]);
        assert!(t.sub(&t).is_exact_zero());
        let a = s(&[(int(0), 1), (int(1), 1)]);
        let b = PuiseuxSeries::new(vec![(int(0), c(1)), (int(1), c(-1))], Some(int(5)));
        let p = a.mul(&b);
        assert_eq!(p, PuiseuxSeries::new(vec![(int(0), c(1)), (int(2), c(-1))], Some(int(5))));
    }

    #[test]
    fn truncation_propagates_through_products() {
        // a = t + O(t^>3), b = t^2 exact: product known up to 2 + 3 = 5
        let a = PuiseuxSeries::new(vec![(int(1), c(1))], Some(int(3)));
        let b = s(&[(int(2), 1)]);
        assert_eq!(a.mul(&b).trunc(), Some(&int(5)));
        let sum = a.add(&b);
        assert_eq!(sum.trunc(), Some(&int(3)));
    }

    #[test]
    fn scale_variable_examples() {
        let t3 = s(&[(int(3), 1)]);
        assert_eq!(t3.scale_variable(2, 1).unwrap(), s(&[(int(3), -1)]));
        let t2 = s(&[(int(2), 1)]);
        assert_eq!(t2.scale_variable(2, 1).unwrap(), t2);
        let half = s(&[(rat(3, 2), 1)]);
        assert!(matches!(half.scale_variable(4, 1), Err(Error::IncompatibleRamification { .. })));
    }

    #[test]
    fn reparameterize_examples() {
        let a = s(&[(int(2), 1), (int(3), 1)]);
        assert_eq!(a.reparameterize(1, 2), s(&[(int(1), 1), (rat(3, 2), 1)]));
        assert_eq!(a.reparameterize(1, 1), a);
        let v = a.reparameterize(3, 4).valuation();
        assert_eq!(v, Valuation::Finite(rat(3, 2)));
    }
}
