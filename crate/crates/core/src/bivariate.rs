//! Sparse bivariate polynomials in `(x, y)` with cyclotomic coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::cyclo::CycloNumber;
use crate::ring::{int, Rational};
use crate::series::PuiseuxSeries;
use crate::unipoly::UniPoly;

/// Polynomials over `Q(zeta_N)[x]`, the coefficient ring used for the y-gcd.
pub type KxPoly = UniPoly<CycloNumber>;

/// Terms keyed by `(i, j)` for `x^i y^j`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), CycloNumber>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: CycloNumber) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: CycloNumber, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(CycloNumber::from_int(1), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(CycloNumber::from_int(1), 0, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), CycloNumber)>) -> Self {
        let mut p = Self::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: CycloNumber) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&(i, j)) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&(i, j));
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert((i, j), c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), CycloNumber> {
        &self.terms
    }

    pub fn coeff(&self, i: u32, j: u32) -> CycloNumber {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(|| CycloNumber::from_int(0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        BivariatePoly { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term(i1 + i2, j1 + j2, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, a)| (*k, a.mul(c))))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(CycloNumber::from_int(1));
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

    pub fn constant_term(&self) -> CycloNumber {
        self.coeff(0, 0)
    }

    /// Largest conductor among the coefficients.
    pub fn conductor(&self) -> u32 {
        use num_integer::Integer;
        self.terms.values().fold(1, |acc, c| acc.lcm(&c.conductor()))
    }

    /// Multiplicity at the origin: the lowest total degree.
    pub fn multiplicity(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    /// Lowest-degree homogeneous part.
    pub fn initial_form(&self) -> Self {
        match self.multiplicity() {
            None => Self::zero(),
            Some(d) => Self::from_terms(self.terms.iter().filter(|((i, j), _)| i + j == d).map(|(k, c)| (*k, c.clone()))),
        }
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn derivative_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c.scale(&int(j as i64)))),
        )
    }

    /// `f(x, y) = sum_j a_j(x) y^j` as a polynomial in `y` over `K[x]`.
    pub fn to_y_poly(&self) -> UniPoly<KxPoly> {
        let dy = self.degree_y().unwrap_or(0) as usize;
        let mut rows: Vec<Vec<CycloNumber>> = vec![Vec::new(); dy + 1];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, CycloNumber::from_int(0));
            }
            row[i as usize] = c.clone();
        }
        UniPoly::new(rows.into_iter().map(UniPoly::new).collect())
    }

    pub fn from_y_poly(p: &UniPoly<KxPoly>) -> Self {
        let mut out = Self::zero();
        for (j, row) in p.coeffs().iter().enumerate() {
            for (i, c) in row.coeffs().iter().enumerate() {
                out.add_term(i as u32, j as u32, c.clone());
            }
        }
        out
    }

    /// Substitutes polynomials for `x` and `y`.
    pub fn substitute(&self, xs: &Self, ys: &Self) -> Self {
        let mut xpow: Vec<Self> = vec![Self::constant(CycloNumber::from_int(1))];
        let mut ypow: Vec<Self> = vec![Self::constant(CycloNumber::from_int(1))];
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            while xpow.len() <= i as usize {
                let next = xpow.last().unwrap().mul(xs);
                xpow.push(next);
            }
            while ypow.len() <= j as usize {
                let next = ypow.last().unwrap().mul(ys);
                ypow.push(next);
            }
            out = out.add(&xpow[i as usize].mul(&ypow[j as usize]).scale(c));
        }
        out
    }

    /// Linear change of coordinates `x -> a x + b y`, `y -> c x + d y`.
    pub fn linear_change(&self, a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Self {
        let lin = |p: &Rational, q: &Rational| {
            BivariatePoly::from_terms([
                ((1, 0), CycloNumber::rational(p.clone())),
                ((0, 1), CycloNumber::rational(q.clone())),
            ])
        };
        self.substitute(&lin(a, b), &lin(c, d))
    }

    pub fn eval(&self, x: &CycloNumber, y: &CycloNumber) -> CycloNumber {
        // Horner in y over Horner in x.
        let yp = self.to_y_poly();
        let vals: Vec<CycloNumber> = yp.coeffs().iter().map(|row| row.eval(x)).collect();
        vals.iter().rev().fold(CycloNumber::from_int(0), |acc, c| acc.mul(y).add(c))
    }

    pub fn eval_complex(&self, x: num_complex::Complex64, y: num_complex::Complex64) -> num_complex::Complex64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.to_complex() * x.powu(i) * y.powu(j))
            .sum()
    }

    /// `f(x(t), y(t))` for series arguments.
    pub fn compose_series(&self, xs: &PuiseuxSeries, ys: &PuiseuxSeries) -> PuiseuxSeries {
        let one = PuiseuxSeries::monomial(CycloNumber::from_int(1), Rational::zero());
        let mut xpow = vec![one.clone()];
        let mut ypow = vec![one];
        let mut out = PuiseuxSeries::zero();
        for (&(i, j), c) in &self.terms {
            while xpow.len() <= i as usize {
                let next = xpow.last().unwrap().mul(xs);
                xpow.push(next);
            }
            while ypow.len() <= j as usize {
                let next = ypow.last().unwrap().mul(ys);
                ypow.push(next);
            }
            out = out.add(&xpow[i as usize].mul(&ypow[j as usize]).scale(c));
        }
        out
    }

    /// Keeps only terms with `x`-exponent `<= max_i`.
    pub fn truncate_x(&self, max_i: u32) -> Self {
        Self::from_terms(self.terms.iter().filter(|((i, _), _)| *i <= max_i).map(|(k, c)| (*k, c.clone())))
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest y-degree first, then ascending x.
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        for (idx, (i, j)) in keys.into_iter().enumerate() {
            let c = &self.terms[&(i, j)];
            let mono = match (i, j) {
                (0, 0) => String::new(),
                (i, 0) => pow_str("x", i),
                (0, j) => pow_str("y", j),
                (i, j) => format!("{}*{}", pow_str("x", i), pow_str("y", j)),
            };
            let (neg, body) = match c.as_rational() {
                Some(q) if q < Rational::zero() => (true, coeff_str(&CycloNumber::rational(-q), &mono)),
                _ => (false, coeff_str(c, &mono)),
            };
            match (idx, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

fn pow_str(v: &str, e: u32) -> String {
    if e == 1 {
        v.to_string()
    } else {
        format!("{v}^{e}")
    }
}

fn coeff_str(c: &CycloNumber, mono: &str) -> String {
    if mono.is_empty() {
        return match c.as_rational() {
            Some(_) => format!("{c}"),
            None => format!("({c})"),
        };
    }
    if *c == CycloNumber::from_int(1) {
        return mono.to_string();
    }
    match c.as_rational() {
        Some(_) => format!("{c}*{mono}"),
        None => format!("({c})*{mono}"),
    }
}

impl fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
