//! Radicals that stay inside the cyclotomic tower.
//!
//! Square roots of rationals come from quadratic Gauss sums; k-th roots of
//! `q * zeta` are supported when `q^2` is a perfect k-th power.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclo::CycloNumber;
use crate::ring::{rational_nth_root, square_part, Rational};

fn legendre(a: u64, p: u64) -> i64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Positive real square root of a prime.
fn sqrt_prime(p: u64) -> CycloNumber {
    let root = if p == 2 {
        CycloNumber::root_of_unity(8, 1).add(&CycloNumber::root_of_unity(8, 7))
    } else {
        let n = p as u32;
        let mut g = CycloNumber::embed(Rational::zero(), n);
        for a in 1..p {
            let term = CycloNumber::root_of_unity(n, a as i64);
            g = if legendre(a, p) == 1 { g.add(&term) } else { g.sub(&term) };
        }
        if p % 4 == 1 {
            g
        } else {
            // g = i sqrt(p)
            g.mul(&CycloNumber::root_of_unity(4, 3))
        }
    };
    if root.to_complex().re < 0.0 {
        root.neg()
    } else {
        root
    }
}

/// Positive square root of a positive squarefree integer.
fn sqrt_squarefree(mut n: u64) -> CycloNumber {
    let mut acc = CycloNumber::from_int(1);
    let mut p = 2;
    while n > 1 {
        if n % p == 0 {
            debug_assert!(is_prime(p));
            acc = acc.mul(&sqrt_prime(p));
            n /= p;
        }
        p += 1;
    }
    acc
}

/// Positive real square root of a positive rational, or `None` when the
/// squarefree kernel does not fit in 64 bits.
pub fn sqrt_rational(q: &Rational) -> Option<CycloNumber> {
    if !q.is_positive() {
        return if q.is_zero() { Some(CycloNumber::from_int(0)) } else { None };
    }
    // sqrt(a/b) = sqrt(a b) / b
    let ab: BigInt = q.numer() * q.denom();
    let (s, n) = square_part(ab);
    let n = n.to_u64()?;
    let scale = Rational::new(s, q.denom().clone());
    Some(sqrt_squarefree(n).scale(&scale))
}

/// Minimal conductor needed for `sqrt(q)`, for cap checks before computing it.
pub fn sqrt_conductor(q: &Rational) -> Option<u32> {
    let ab: BigInt = q.numer().abs() * q.denom();
    let (_, n) = square_part(ab);
    let mut n = n.to_u64()?;
    let mut cond: u64 = 1;
    let mut p = 2;
    while n > 1 {
        if n % p == 0 {
            let c = match p {
                2 => 8,
                _ if p % 4 == 1 => p,
                _ => 4 * p,
            };
            cond = cond.lcm(&c);
            n /= p;
        }
        p += 1;
    }
    u32::try_from(cond).ok()
}

/// One k-th root of `w`, if `w = q * zeta` with `q^2` a perfect k-th power.
///
/// Returns `None` when the root leaves the supported tower or its conductor exceeds `cap`.
pub fn nth_root(w: &CycloNumber, k: u32, cap: u32) -> Option<CycloNumber> {
    if k == 1 {
        return Some(w.clone());
    }
    let (q, m, j) = w.as_rational_times_root_of_unity()?;
    let radical = match rational_nth_root(&q, k) {
        Some(r) => CycloNumber::rational(r),
        None => {
            let sigma = rational_nth_root(&(&q * &q), k)?;
            if sqrt_conductor(&sigma)? > cap {
                return None;
            }
            sqrt_rational(&sigma)?
        }
    };
    let big = k * m;
    let g = big.gcd(&j).max(1);
    let (n, e) = if j == 0 { (1, 0) } else { (big / g, j / g) };
    let cond = n.lcm(&radical.conductor());
    if cond > cap {
        return None;
    }
    let unit = CycloNumber::root_of_unity(n, e as i64);
    let root = radical.mul(&unit);
    debug_assert!(root.pow(k) == *w);
    Some(root)
}

/// Rational roots of a polynomial with rational coefficients (low degree first).
pub fn rational_roots(coeffs: &[Rational]) -> Vec<Rational> {
    let mut roots = Vec::new();
    let mut c: Vec<Rational> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.len() < 2 {
        return roots;
    }
    if c[0].is_zero() {
        roots.push(Rational::zero());
        let first = c.iter().position(|x| !x.is_zero()).unwrap();
        c.drain(..first);
    }
    if c.len() < 2 {
        return roots;
    }
    let lcm_den = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c.iter().map(|x| (x * Rational::from_integer(lcm_den.clone())).to_integer()).collect();
    let a0 = ints[0].abs();
    let an = ints.last().unwrap().abs();
    let (Some(a0s), Some(ans)) = (a0.to_u64(), an.to_u64()) else {
        return roots;
    };
    let divs = |v: u64| -> Vec<u64> {
        (1..).take_while(|d| d * d <= v).filter(|d| v % d == 0).flat_map(|d| [d, v / d]).collect()
    };
    let mut seen = Vec::new();
    for p in divs(a0s) {
        for qd in divs(ans) {
            for sign in [1i64, -1] {
                let cand = Rational::new(BigInt::from(p) * sign, BigInt::from(qd));
                if seen.contains(&cand) {
                    continue;
                }
                seen.push(cand.clone());
                let val = ints
                    .iter()
                    .rev()
                    .fold(Rational::zero(), |acc, a| acc * &cand + Rational::from_integer(a.clone()));
                if val.is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, rat};

    #[test]
    fn square_roots_square_back() {
        for (n, d) in [(2, 1), (3, 1), (5, 1), (6, 1), (7, 3), (15, 4), (12, 1), (1, 9)] {
            let q = rat(n, d);
            let r = sqrt_rational(&q).unwrap();
            assert_eq!(r.mul(&r), CycloNumber::rational(q.clone()), "sqrt({n}/{d})");
            let expected = (n as f64 / d as f64).sqrt();
            assert!((r.to_complex().re - expected).abs() < 1e-9);
            assert!(r.conductor() <= sqrt_conductor(&q).unwrap().max(1) * 4);
        }
    }

    #[test]
    fn kth_roots_of_roots_of_unity_and_powers() {
        let w = CycloNumber::from_int(-1);
        let r = nth_root(&w, 2, 120).unwrap();
        assert_eq!(r.mul(&r), w);
        let w = CycloNumber::rational(rat(8, 27));
        assert_eq!(nth_root(&w, 3, 120).unwrap(), CycloNumber::rational(rat(2, 3)));
        let w = CycloNumber::from_int(2);
        let r = nth_root(&w, 2, 120).unwrap();
        assert_eq!(r.mul(&r), w);
        // cube root of 2 is not abelian
        assert!(nth_root(&w, 3, 120).is_none());
        // fourth root of 4 is sqrt 2
        let r = nth_root(&CycloNumber::from_int(4), 4, 120).unwrap();
        assert_eq!(r.pow(4), CycloNumber::from_int(4));
    }

    #[test]
    fn rational_root_search() {
        // 2x^2 - 3x + 1 = (2x - 1)(x - 1)
        assert_eq!(rational_roots(&[int(1), int(-3), int(2)]), vec![rat(1, 2), int(1)]);
        assert_eq!(rational_roots(&[int(0), int(0), int(1)]), vec![int(0)]);
        assert!(rational_roots(&[int(-2), int(0), int(1)]).is_empty());
    }
}
