//! Dense univariate polynomials over a [`Ring`], coefficients stored low degree first.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Field, Ring};

#[derive(Clone, PartialEq)]
pub struct UniPoly<R: Ring> {
    coeffs: Vec<R>,
}

impl<R: Ring> UniPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: R, degree: usize) -> Self {
        let mut v = vec![R::zero(); degree + 1];
        v[degree] = c;
        Self::new(v)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(R::one(), 1)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).plus(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).minus(&other.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(R::negated).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(R::one());
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

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.times(&R::from_int(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc.times(x).plus(c))
    }

    /// Composition `self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(other).add(&Self::constant(c.clone())))
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self mod d`, computed without division.
    pub fn pseudo_rem(&self, d: &Self) -> Result<Self> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lc = d.coeffs[dd].clone();
        let mut r = self.clone();
        let mut steps = match self.degree() {
            Some(n) if n >= dd => n - dd + 1,
            _ => 0,
        };
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let shift = Self::monomial(r.coeffs[rd].clone(), rd - dd);
            r = r.scale(&lc).sub(&shift.mul(d));
            steps -= 1;
        }
        for _ in 0..steps {
            r = r.scale(&lc);
        }
        Ok(r)
    }
}

impl<F: Field> UniPoly<F> {
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = d.coeffs[dd].inverse()?;
        let mut r = self.clone();
        let mut q = vec![F::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.coeffs[rd].times(&lc_inv);
            q[rd - dd] = c.clone();
            r = r.sub(&Self::monomial(c, rd - dd).mul(d));
        }
        Ok((Self::new(q), r))
    }

    pub fn monic(&self) -> Result<Self> {
        match self.leading() {
            None => Ok(Self::zero()),
            Some(lc) => Ok(self.scale(&lc.inverse()?)),
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s)` with `s * self = g (mod other)`, `g` monic.
    pub fn gcd_with_cofactor(&self, other: &Self) -> Result<(Self, Self)> {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::constant(F::one()), Self::zero());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let lc = r0.leading().ok_or(Error::DivisionByZero)?.inverse()?;
        Ok((r0.scale(&lc), s0.scale(&lc)))
    }

    /// Division that must be exact.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Inconsistent("polynomial division was not exact".into()))
        }
    }

    /// Yun's squarefree decomposition: returns `(factor, multiplicity)` with monic factors.
    pub fn squarefree(&self) -> Result<Vec<(Self, u32)>> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return Ok(out);
        }
        let f = self.monic()?;
        let df = f.derivative();
        let a0 = f.gcd(&df)?;
        let mut b = f.exact_div(&a0)?;
        let mut c = df.exact_div(&a0)?;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d)?;
            b = b.exact_div(&a)?;
            c = d.exact_div(&a)?;
            d = c.sub(&b.derivative());
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        Ok(out)
    }
}

impl<R: Ring> Ring for UniPoly<R> {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn from_int(n: i64) -> Self {
        UniPoly::constant(R::from_int(n))
    }
}

impl<R: Ring + fmt::Display> fmt::Display for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let simple = !text.trim_start_matches('-').contains(' ');
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if simple => (true, rest.to_string()),
                _ => (false, text),
            };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let coeff = if simple { body } else { format!("({body})") };
            match (i, coeff.as_str()) {
                (0, _) => write!(f, "{coeff}")?,
                (1, "1") => write!(f, "z")?,
                (1, _) => write!(f, "{coeff}*z")?,
                (_, "1") => write!(f, "z^{i}")?,
                _ => write!(f, "{coeff}*z^{i}")?,
            }
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, Rational};

    fn q(v: &[i64]) -> UniPoly<Rational> {
        UniPoly::new(v.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn divrem_and_gcd() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let (qt, r) = q(&[-1, 0, 1]).divrem(&q(&[-1, 1])).unwrap();
        assert_eq!(qt, q(&[1, 1]));
        assert!(r.is_zero());
        let g = q(&[-1, 0, 1]).gcd(&q(&[1, 2, 1])).unwrap();
        assert_eq!(g, q(&[1, 1]));
    }

    #[test]
    fn squarefree_decomposition() {
        // (x - 1)^2 (x + 2)
        let f = q(&[-1, 1]).pow(2).mul(&q(&[2, 1]));
        let sf = f.squarefree().unwrap();
        assert_eq!(sf, vec![(q(&[2, 1]), 1), (q(&[-1, 1]), 2)]);
    }

    #[test]
    fn pseudo_remainder_matches_scaled_remainder() {
        let a = q(&[1, 2, 3, 4]);
        let d = q(&[1, 0, 2]);
        let pr = a.pseudo_rem(&d).unwrap();
        let (_, r) = a.divrem(&d).unwrap();
        assert_eq!(pr, r.scale(&int(4)));
    }

    #[test]
    fn inverse_cofactor() {
        let a = q(&[1, 1]);
        let m = q(&[1, 0, 1]);
        let (g, s) = a.gcd_with_cofactor(&m).unwrap();
        assert_eq!(g, q(&[1]));
        let (_, r) = s.mul(&a).divrem(&m).unwrap();
        assert_eq!(r, q(&[1]));
    }
}
