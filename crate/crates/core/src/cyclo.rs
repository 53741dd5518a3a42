//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! An element is stored in the power basis `1, zeta, ..., zeta^(phi(N)-1)` of
//! `Q[x]/Phi_N(x)`. The representation is canonical for a fixed conductor, so
//! equality and zero-testing are coefficient-wise after lifting to a common
//! conductor.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::{self, format_rational, Rational};
use crate::unipoly::UniPoly;

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn divisors(n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

/// Exact division of integer polynomials (low degree first) by a monic divisor.
fn int_poly_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut q = vec![BigInt::zero(); num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (k, dk) in den.iter().enumerate() {
            rem[i + k] -= &c * dk;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

fn phi_coeffs(n: u32) -> Arc<Vec<BigInt>> {
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d < n {
            poly = int_poly_exact_div(&poly, &phi_coeffs(d));
        }
    }
    let arc = Arc::new(poly);
    phi_cache().lock().unwrap().insert(n, arc.clone());
    arc
}

/// The `N`-th cyclotomic polynomial as integer coefficients, low degree first.
///
/// Computed by dividing `x^N - 1` by `Phi_d` for every proper divisor `d` of `N`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "conductor must be positive");
    phi_coeffs(n).as_ref().clone()
}

/// Euler's totient, i.e. `deg Phi_N`.
pub fn totient(n: u32) -> usize {
    phi_coeffs(n).len() - 1
}

/// Reduces a rational coefficient vector modulo `Phi_N` into canonical length.
fn reduce(mut v: Vec<Rational>, n: u32) -> Vec<Rational> {
    let phi = phi_coeffs(n);
    let deg = phi.len() - 1;
    if v.len() > deg {
        for i in (deg..v.len()).rev() {
            let c = std::mem::replace(&mut v[i], Rational::zero());
            if c.is_zero() {
                continue;
            }
            for (k, pk) in phi.iter().enumerate().take(deg) {
                if !pk.is_zero() {
                    v[i - deg + k] -= &c * Rational::from_integer(pk.clone());
                }
            }
        }
    }
    v.resize(deg, Rational::zero());
    v
}

/// An exact element of `Q(zeta_N)`.
#[derive(Clone)]
pub struct CycloNumber {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl CycloNumber {
    pub fn from_coeffs(conductor: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::InvalidBranch("conductor must be positive".into()));
        }
        let deg = totient(conductor);
        if coeffs.len() != deg {
            return Err(Error::Schema {
                pointer: "/coeffs".into(),
                message: format!("conductor {conductor} needs {deg} coefficients, got {}", coeffs.len()),
            });
        }
        Ok(CycloNumber { conductor, coeffs })
    }

    /// The constant `q` viewed in conductor `n`.
    pub fn embed(q: Rational, n: u32) -> Self {
        let mut coeffs = vec![Rational::zero(); totient(n)];
        coeffs[0] = q;
        CycloNumber { conductor: n, coeffs }
    }

    pub fn rational(q: Rational) -> Self {
        Self::embed(q, 1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `zeta_N^k` reduced modulo `Phi_N`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut v = vec![Rational::zero(); e + 1];
        v[e] = Rational::one();
        CycloNumber { conductor: n, coeffs: reduce(v, n) }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Rewrites the element in conductor `m`, which must be a multiple of the current one.
    pub fn lift(&self, m: u32) -> Self {
        if m == self.conductor {
            return self.clone();
        }
        assert!(m % self.conductor == 0, "lift target {m} is not a multiple of {}", self.conductor);
        let step = (m / self.conductor) as usize;
        let mut v = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        CycloNumber { conductor: m, coeffs: reduce(v, m) }
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.conductor == other.conductor {
            return (self.clone(), other.clone());
        }
        let m = self.conductor.lcm(&other.conductor);
        (self.lift(m), other.lift(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.conductor == other.conductor {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
            return CycloNumber { conductor: self.conductor, coeffs };
        }
        let (a, b) = self.common(other);
        a.add(&b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CycloNumber { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.conductor != other.conductor {
            // Rational constants multiply without lifting.
            if let Some(q) = other.as_rational() {
                return self.scale(&q);
            }
            if let Some(q) = self.as_rational() {
                return other.scale(&q);
            }
            let (a, b) = self.common(other);
            return a.mul(&b);
        }
        let n = self.coeffs.len();
        let mut v = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        CycloNumber { conductor: self.conductor, coeffs: reduce(v, self.conductor) }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycloNumber { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = CycloNumber::embed(Rational::one(), self.conductor);
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

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(CycloNumber::embed(q.recip(), self.conductor));
        }
        let a = UniPoly::new(self.coeffs.clone());
        let phi = UniPoly::new(phi_coeffs(self.conductor).iter().cloned().map(Rational::from_integer).collect());
        let (g, s) = a.gcd_with_cofactor(&phi)?;
        debug_assert_eq!(g.degree(), Some(0));
        Ok(CycloNumber { conductor: self.conductor, coeffs: reduce(s.into_coeffs(), self.conductor) })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// The element as a rational number, when it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Writes the element as `q * zeta_M^j` with `q > 0` rational, when possible.
    ///
    /// `M` is `lcm(2, N)`, which contains every root of unity of `Q(zeta_N)`.
    pub fn as_rational_times_root_of_unity(&self) -> Option<(Rational, u32, u32)> {
        if self.is_zero() {
            return None;
        }
        let m = self.conductor.lcm(&2);
        let lifted = self.lift(m);
        for j in 0..m {
            let rotated = lifted.mul(&CycloNumber::root_of_unity(m, -(j as i64)));
            if let Some(q) = rotated.as_rational() {
                if q.is_positive() {
                    return Some((q, m, j));
                }
            }
        }
        None
    }

    /// Evaluates the power basis at `exp(2 pi i / N)` in double precision.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let angle = 2.0 * std::f64::consts::PI * (k as f64) / n;
                Complex64::from_polar(1.0, angle) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloNumber {}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", format_rational(&q));
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let zeta = format!("zeta({})", self.conductor);
            match (k, abs.is_one()) {
                (0, _) => write!(f, "{}", format_rational(&abs))?,
                (1, true) => write!(f, "{zeta}")?,
                (1, false) => write!(f, "{}*{zeta}", format_rational(&abs))?,
                (_, true) => write!(f, "{zeta}^{k}")?,
                (_, false) => write!(f, "{}*{zeta}^{k}", format_rational(&abs))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl ring::Ring for CycloNumber {
    fn zero() -> Self {
        CycloNumber::from_int(0)
    }
    fn one() -> Self {
        CycloNumber::from_int(1)
    }
    fn is_zero(&self) -> bool {
        CycloNumber::is_zero(self)
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
        CycloNumber::from_int(n)
    }
}

impl ring::Field for CycloNumber {
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, rat};

    fn z(n: u32, k: i64) -> CycloNumber {
        CycloNumber::root_of_unity(n, k)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        // Phi_6 = (x^6 - 1) / ((x - 1)(x + 1)(x^2 + x + 1)) = x^2 - x + 1
        let denom = [ints(&[-1, 1]), ints(&[1, 1]), ints(&[1, 1, 1])];
        let mut oracle = ints(&[-1, 0, 0, 0, 0, 0, 1]);
        for d in &denom {
            oracle = int_poly_exact_div(&oracle, d);
        }
        assert_eq!(oracle, ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(6), oracle);
    }

    #[test]
    fn product_of_cyclotomic_polynomials_is_x_n_minus_one() {
        for n in 1..=60u32 {
            let mut prod = UniPoly::<Rational>::constant(int(1));
            for d in divisors(n) {
                let phi = UniPoly::new(cyclotomic_polynomial(d).into_iter().map(Rational::from_integer).collect());
                prod = prod.mul(&phi);
            }
            let target = UniPoly::monomial(int(1), n as usize).sub(&UniPoly::constant(int(1)));
            assert_eq!(prod, target, "N = {n}");
        }
    }

    #[test]
    fn embed_examples() {
        assert!(CycloNumber::embed(int(0), 7).is_zero());
        assert_eq!(CycloNumber::embed(int(1), 4).coeffs(), &[int(1), int(0)]);
        assert_eq!(CycloNumber::embed(rat(-3, 2), 1).coeffs(), &[rat(-3, 2)]);
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(z(4, 2), CycloNumber::from_int(-1));
        for n in 1..=12 {
            assert_eq!(z(n, n as i64), CycloNumber::from_int(1));
            assert_eq!(z(n, 0), CycloNumber::from_int(1));
        }
        assert_eq!(z(3, 1).add(&z(3, 2)), CycloNumber::from_int(-1));
        assert!(CycloNumber::from_int(1).add(&z(3, 1)).add(&z(3, 2)).is_zero());
    }

    #[test]
    fn field_operations() {
        assert_eq!(z(4, 1).mul(&z(4, 1)), CycloNumber::from_int(-1));
        for n in 2..=15 {
            assert_eq!(z(n, 1).inv().unwrap(), z(n, n as i64 - 1));
        }
        assert_eq!(CycloNumber::from_int(0).inv(), Err(Error::DivisionByZero));
        // mixed conductors: zeta_4 * zeta_6 = zeta_12^5
        assert_eq!(z(4, 1).mul(&z(6, 1)), z(12, 5));
    }

    #[test]
    fn complex_values() {
        let one = CycloNumber::from_int(1).to_complex();
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((z(4, 1).to_complex() - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!((z(3, 1).add(&z(3, 2)).to_complex() - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rational_times_root_of_unity_detection() {
        let w = z(6, 1).scale(&rat(5, 3));
        let (q, m, j) = w.as_rational_times_root_of_unity().unwrap();
        assert_eq!(q, rat(5, 3));
        assert_eq!(z(m, j as i64), z(6, 1));
        let neg = CycloNumber::from_int(-2);
        let (q, m, j) = neg.as_rational_times_root_of_unity().unwrap();
        assert_eq!((q, z(m, j as i64)), (int(2), CycloNumber::from_int(-1)));
        assert!(CycloNumber::from_int(1).add(&z(5, 1)).as_rational_times_root_of_unity().is_none());
    }
}
