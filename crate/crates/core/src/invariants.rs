//! Characteristic (Puiseux) pairs, coincidence exponents, orders of germs along
//! arcs, contacts and intersection numbers of branches.
//!
//! Conventions: `e_0 = m`, `beta_0 = 0`, `beta_(s+1) = +inf`. An arc is compared
//! with a branch `t -> (t^m, psi(t))` after rewriting it with first coordinate
//! `t^m`; its second coordinate `y` then has rational exponents and
//! `lambda = max_l val(y(t) - psi(zeta_m^l t))`.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arc::{Arc, BranchGerm};
use crate::error::{Error, Result};
use crate::germ::GermPresentation;
use crate::ring::{format_rational, int, Rational};
use crate::series::{PuiseuxSeries, Valuation};

/// A rational number or `+inf`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRational {
    Finite(Rational),
    Infinity,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(q) => Some(q),
            ExtRational::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinity,
        }
    }

    /// Multiplication by a positive rational.
    pub fn scale(&self, q: &Rational) -> Self {
        match self {
            ExtRational::Finite(a) => ExtRational::Finite(a * q),
            ExtRational::Infinity => ExtRational::Infinity,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(q) => write!(f, "{}", format_rational(q)),
            ExtRational::Infinity => write!(f, "inf"),
        }
    }
}

/// Puiseux characteristic of a branch: `(beta_i, e_i)` pairs plus the `m_i` with
/// `m = e_k (m_k ... m_1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "CharDataJson", try_from = "CharDataJson")]
pub struct CharData {
    pub m: u32,
    pub beta: Vec<u64>,
    pub e: Vec<u64>,
    pub msub: Vec<u64>,
}

impl CharData {
    pub fn s(&self) -> usize {
        self.beta.len()
    }

    pub fn pairs(&self) -> Vec<(u64, u64)> {
        self.beta.iter().copied().zip(self.e.iter().copied()).collect()
    }

    /// `e_i`, with `e_0 = m`.
    pub fn e_at(&self, i: usize) -> u64 {
        if i == 0 {
            self.m as u64
        } else {
            self.e[i - 1]
        }
    }

    /// `beta_i`, with `beta_0 = 0` and `None` standing for `beta_(s+1) = +inf`.
    pub fn beta_at(&self, i: usize) -> Option<u64> {
        match i {
            0 => Some(0),
            _ => self.beta.get(i - 1).copied(),
        }
    }

    /// The unique `k` in `0..=s` with `beta_k <= x < beta_(k+1)`, for `x >= 0`.
    pub fn regime(&self, x: &Rational) -> usize {
        self.beta.iter().take_while(|&&b| int(b as i64) <= *x).count()
    }

    /// `e_k lambda + (e_0 - e_1) beta_1 + ... + (e_(k-1) - e_k) beta_k`.
    pub fn affine_order(&self, k: usize, lambda: &Rational) -> Rational {
        let mut acc = lambda * int(self.e_at(k) as i64);
        for i in 1..=k {
            let coeff = self.e_at(i - 1) as i64 - self.e_at(i) as i64;
            acc += int(coeff * self.beta[i - 1] as i64);
        }
        acc
    }

    /// Checks the recurrence invariants; used by tests and deserialization callers.
    pub fn is_consistent(&self) -> bool {
        if self.beta.len() != self.e.len() || self.e.len() != self.msub.len() {
            return false;
        }
        let mut prev_e = self.m as u64;
        let mut prev_beta = 0;
        let mut prod = 1u64;
        for i in 0..self.s() {
            let (b, e) = (self.beta[i], self.e[i]);
            if b <= prev_beta || b % prev_e == 0 || e != prev_e.gcd(&b) || self.msub[i] * e != prev_e {
                return false;
            }
            prod *= self.msub[i];
            if e * prod != self.m as u64 {
                return false;
            }
            prev_e = e;
            prev_beta = b;
        }
        prev_e == 1
    }
}

#[derive(Serialize, Deserialize)]
struct CharDataJson {
    m: u32,
    pairs: Vec<(u64, u64)>,
    msub: Vec<u64>,
}

impl From<CharData> for CharDataJson {
    fn from(c: CharData) -> Self {
        CharDataJson { m: c.m, pairs: c.pairs(), msub: c.msub }
    }
}

impl TryFrom<CharDataJson> for CharData {
    type Error = String;

    fn try_from(j: CharDataJson) -> std::result::Result<Self, String> {
        let (beta, e) = j.pairs.into_iter().unzip();
        let c = CharData { m: j.m, beta, e, msub: j.msub };
        if c.is_consistent() {
            Ok(c)
        } else {
            Err("characteristic data violates the gcd recurrence".into())
        }
    }
}

impl fmt::Display for CharData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} pairs=[", self.m)?;
        for (i, (b, e)) in self.pairs().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({b},{e})")?;
        }
        write!(f, "]")
    }
}

/// Applies `beta_(i+1) = min{ j : a_j != 0, e_i does not divide j }`,
/// `e_(i+1) = gcd(e_i, beta_(i+1))` over the support of `psi`.
pub fn characteristic_data(b: &BranchGerm) -> Result<CharData> {
    let m = b.m() as u64;
    let mut current = m;
    let (mut beta, mut e, mut msub) = (Vec::new(), Vec::new(), Vec::new());
    for (exp, _) in b.psi().terms() {
        if current == 1 {
            break;
        }
        let j = exp.to_integer().to_u64().expect("branch exponents are positive integers");
        if j % current != 0 {
            let next = current.gcd(&j);
            beta.push(j);
            e.push(next);
            msub.push(current / next);
            current = next;
        }
    }
    if current != 1 {
        return Err(if b.psi().is_exact() {
            Error::NotIrreducible(format!("gcd chain of m = {m} stops at {current}"))
        } else {
            Error::truncation(format!(
                "gcd chain of m = {m} has not reached 1 within trunc {}",
                b.psi().trunc().map(format_rational).unwrap_or_default()
            ))
        });
    }
    Ok(CharData { m: b.m(), beta, e, msub })
}

/// `val(y(t) - psi(zeta_m^l t))` for `l = 1..=m`; `y` must already have first coordinate `t^m`.
pub fn conjugate_valuations(y: &PuiseuxSeries, b: &BranchGerm) -> Vec<Valuation> {
    (1..=b.m() as i64).map(|l| y.sub(&b.conjugate(l)).valuation()).collect()
}

fn max_coincidence(vals: &[Valuation]) -> Result<(ExtRational, u32)> {
    let mut best: Option<(ExtRational, u32)> = None;
    for (idx, v) in vals.iter().enumerate() {
        let cand = match v {
            Valuation::Finite(q) => ExtRational::Finite(q.clone()),
            Valuation::Infinite => ExtRational::Infinity,
            Valuation::AboveTrunc(t) => {
                return Err(Error::truncation(format!(
                    "coincidence with conjugate {} exceeds the known range t^{}",
                    idx + 1,
                    format_rational(t)
                )))
            }
        };
        if best.as_ref().map_or(true, |(b, _)| cand.cmp(b) == Ordering::Greater) {
            best = Some((cand, idx as u32 + 1));
        }
    }
    best.ok_or_else(|| Error::Inconsistent("branch without conjugates".into()))
}

/// Coincidence exponent `lambda` of the arc `(t^p, y(t))` with the branch, measured
/// with first coordinate `t^m`, and one conjugate index `l` attaining it.
pub fn coincidence_exponent(y: &PuiseuxSeries, b: &BranchGerm, p: u32) -> Result<(ExtRational, u32)> {
    let m = b.m();
    let common = y.reparameterize(m, p);
    // Arcs transverse to the x-axis: psi has order >= m, so y dominates every difference.
    if let Valuation::Finite(v) = common.valuation() {
        if v < int(m as i64) {
            return Ok((ExtRational::Finite(v), m));
        }
    }
    max_coincidence(&conjugate_valuations(&common, b))
}

/// Order, regime and coincidence data of a branch along an arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderResult {
    pub nu: ExtRational,
    pub k: usize,
    pub lambda: ExtRational,
    pub contact: ExtRational,
    /// Order of `|gamma(t)|` in the parameter that `nu` and `lambda` refer to.
    pub mu: Rational,
}

/// Order of the branch's defining function along an arc whose first coordinate is
/// `t^m` (or a y-axis arc), via `nu = e_k lambda + sum (e_(i-1) - e_i) beta_i`.
pub fn order_along_parameterized(b: &BranchGerm, a: &Arc) -> Result<OrderResult> {
    let m = b.m();
    let chars = characteristic_data(b)?;
    match a {
        Arc::YAxis { e, .. } => {
            let e = int(*e as i64);
            Ok(OrderResult {
                nu: ExtRational::Finite(&e * int(m as i64)),
                k: 0,
                lambda: ExtRational::Finite(e.clone()),
                contact: ExtRational::Finite(int(1)),
                mu: e,
            })
        }
        Arc::XNormalized { p, y } => {
            if *p != m {
                return Err(Error::IncompatibleRamification {
                    ramification: m,
                    detail: format!("arc first coordinate is t^{p}, expected t^{m}"),
                });
            }
            let mu = a.size_order()?;
            let (lambda, _) = coincidence_exponent(y, b, m)?;
            Ok(match &lambda {
                ExtRational::Infinity => OrderResult {
                    nu: ExtRational::Infinity,
                    k: chars.s(),
                    lambda,
                    contact: ExtRational::Infinity,
                    mu,
                },
                ExtRational::Finite(l) => {
                    let k = chars.regime(l);
                    OrderResult {
                        nu: ExtRational::Finite(chars.affine_order(k, l)),
                        k,
                        contact: ExtRational::Finite(l / &mu),
                        lambda,
                        mu,
                    }
                }
            })
        }
    }
}

/// Contact `c = lambda / mu` of an arc with the branch's zero locus.
pub fn contact(a: &Arc, b: &BranchGerm) -> Result<ExtRational> {
    match a {
        Arc::YAxis { .. } => Ok(ExtRational::Finite(int(1))),
        Arc::XNormalized { p, y } => {
            let m = b.m();
            let common = y.reparameterize(m, *p);
            if let Valuation::Finite(v) = common.valuation() {
                if v < int(m as i64) {
                    return Ok(ExtRational::Finite(int(1)));
                }
            }
            let mu = a.with_first_exponent(m)?.size_order()?;
            let (lambda, _) = max_coincidence(&conjugate_valuations(&common, b))?;
            Ok(match lambda {
                ExtRational::Finite(l) => ExtRational::Finite(l / mu),
                ExtRational::Infinity => ExtRational::Infinity,
            })
        }
    }
}

/// Order of the branch along the half-branch measured against the size `|gamma(t)|`:
/// `nu = e_k c + sum_(i<=k) (e_(i-1) - e_i) beta_i / m` with `beta_k <= m c < beta_(k+1)`.
///
/// Also evaluates the parameterized form and fails with `Inconsistent` if
/// `nu * mu` disagrees with it.
pub fn order_along_halfbranch(b: &BranchGerm, a: &Arc) -> Result<OrderResult> {
    let chars = characteristic_data(b)?;
    let m = int(b.m() as i64);
    let common = match a {
        Arc::YAxis { .. } => a.clone(),
        Arc::XNormalized { .. } => a.with_first_exponent(b.m())?,
    };
    let param = order_along_parameterized(b, &common)?;
    let c = contact(a, b)?;
    let result = match &c {
        ExtRational::Infinity => OrderResult {
            nu: ExtRational::Infinity,
            k: chars.s(),
            lambda: ExtRational::Infinity,
            contact: c.clone(),
            mu: param.mu.clone(),
        },
        ExtRational::Finite(cv) => {
            let k = chars.regime(&(cv * &m));
            let mut nu = cv * int(chars.e_at(k) as i64);
            for i in 1..=k {
                let coeff = chars.e_at(i - 1) as i64 - chars.e_at(i) as i64;
                nu += int(coeff * chars.beta[i - 1] as i64) / &m;
            }
            OrderResult {
                nu: ExtRational::Finite(nu),
                k,
                lambda: param.lambda.clone(),
                contact: c.clone(),
                mu: param.mu.clone(),
            }
        }
    };
    let expected = param.nu.scale(&(Rational::from_integer(1.into()) / &param.mu));
    if expected != result.nu || param.contact != result.contact {
        return Err(Error::Inconsistent(format!(
            "normalized order {} disagrees with parameterized order {} / {}",
            result.nu,
            param.nu,
            format_rational(&param.mu)
        )));
    }
    Ok(result)
}

/// Order of a (possibly reducible, non-reduced) germ along an arc:
/// the multiplicity-weighted sum of the normalized orders of its factors.
pub fn order_of_germ(g: &GermPresentation, a: &Arc) -> Result<ExtRational> {
    let mut total = ExtRational::Finite(Rational::zero());
    for f in g.factors() {
        let nu = order_along_halfbranch(&f.branch, a)?.nu;
        total = total.add(&nu.scale(&int(f.mult as i64)));
    }
    Ok(total)
}

/// Intersection number `(X_1, X_2)_0` of two distinct branches: the order in `t` of
/// the second branch's equation along `(t^(m_1), psi_1(t))`.
///
/// Both branches are rewritten over `s` with `x = s^L`, `L = lcm(m_1, m_2)`; the
/// conjugate valuations are summed and rescaled by `m_1 / L` back to `t`.
pub fn intersection_number(b1: &BranchGerm, b2: &BranchGerm) -> Result<u64> {
    let (m1, m2) = (b1.m(), b2.m());
    let l = m1.lcm(&m2);
    let y1 = b1.psi().reparameterize(l / m1, 1);
    let mut total_s = Rational::zero();
    for i in 1..=m2 as i64 {
        let conj = b2.conjugate(i).reparameterize(l / m2, 1);
        match y1.sub(&conj).valuation() {
            Valuation::Finite(v) => total_s += v,
            Valuation::Infinite => {
                return Err(Error::NotDistinct("the branches have the same zero locus".into()))
            }
            Valuation::AboveTrunc(t) => {
                return Err(Error::truncation(format!(
                    "branch coincidence exceeds the known range s^{}",
                    format_rational(&t)
                )))
            }
        }
    }
    let total = total_s * Rational::new(m1.into(), l.into());
    if !total.is_integer() || total <= Rational::zero() {
        return Err(Error::Inconsistent(format!(
            "intersection number {} is not a positive integer",
            format_rational(&total)
        )));
    }
    total
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Inconsistent("intersection number overflow".into()))
}
