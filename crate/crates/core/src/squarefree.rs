//! Squarefree decomposition in `K[x][y]` over a cyclotomic field `K`.

use crate::bivariate::{BivariatePoly, KxPoly};
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::unipoly::UniPoly;

type KxyPoly = UniPoly<KxPoly>;

/// Monic gcd in `K[x]` of the `y`-coefficients.
pub fn content(p: &KxyPoly) -> Result<KxPoly> {
    let mut g = KxPoly::zero();
    for c in p.coeffs() {
        g = g.gcd(c)?;
        if g.degree() == Some(0) {
            break;
        }
    }
    Ok(g)
}

fn divide_coeffs(p: &KxyPoly, c: &KxPoly) -> Result<KxyPoly> {
    Ok(UniPoly::new(p.coeffs().iter().map(|a| a.exact_div(c)).collect::<Result<Vec<_>>>()?))
}

pub fn primitive_part(p: &KxyPoly) -> Result<KxyPoly> {
    if p.is_zero() {
        return Ok(p.clone());
    }
    divide_coeffs(p, &content(p)?)
}

/// Normalizes so the leading coefficient in `y` is monic in `x`.
fn normalize(p: KxyPoly) -> Result<KxyPoly> {
    match p.leading().and_then(|lc| lc.leading().cloned()) {
        None => Ok(p),
        Some(c) => {
            let inv = c.inv()?;
            Ok(UniPoly::new(p.coeffs().iter().map(|a| a.scale(&inv)).collect()))
        }
    }
}

/// Gcd in `K[x][y]` by the subresultant polynomial remainder sequence.
pub fn gcd(a: &KxyPoly, b: &KxyPoly) -> Result<KxyPoly> {
    if a.is_zero() {
        return normalize(b.clone());
    }
    if b.is_zero() {
        return normalize(a.clone());
    }
    let c = content(a)?.gcd(&content(b)?)?;
    let (mut u, mut v) = (primitive_part(a)?, primitive_part(b)?);
    if u.degree() < v.degree() {
        std::mem::swap(&mut u, &mut v);
    }
    let one = KxPoly::constant(CycloNumber::from_int(1));
    let (mut g, mut h) = (one.clone(), one);
    loop {
        if v.degree() == Some(0) {
            return normalize(UniPoly::constant(c));
        }
        let delta = u.degree().unwrap() - v.degree().unwrap();
        let r = u.pseudo_rem(&v)?;
        if r.is_zero() {
            break;
        }
        u = v;
        v = divide_coeffs(&r, &g.mul(&h.pow(delta as u32)))?;
        g = u.leading().expect("nonzero remainder").clone();
        h = if delta == 0 { h } else { g.pow(delta as u32).exact_div(&h.pow(delta as u32 - 1))? };
    }
    normalize(primitive_part(&v)?.scale(&c))
}

/// Cheap certificate that `p` is squarefree: some specialization `x = x0` keeping the
/// `y`-degree gives a squarefree polynomial in `y`.
fn specializes_squarefree(p: &KxyPoly) -> Result<bool> {
    let lc = p.leading().expect("nonzero polynomial");
    for x0 in 1..=8i64 {
        let x0 = CycloNumber::from_int(x0);
        if lc.eval(&x0).is_zero() {
            continue;
        }
        let q: UniPoly<CycloNumber> = UniPoly::new(p.coeffs().iter().map(|c| c.eval(&x0)).collect());
        return Ok(q.gcd(&q.derivative())?.degree() == Some(0));
    }
    Ok(false)
}

/// Division in `K[x][y]` that must be exact.
pub fn exact_div(a: &KxyPoly, d: &KxyPoly) -> Result<KxyPoly> {
    let dd = d.degree().ok_or(Error::DivisionByZero)?;
    let lc = d.leading().expect("nonzero divisor");
    let mut r = a.clone();
    let mut q = vec![KxPoly::zero(); a.coeffs().len().saturating_sub(dd)];
    while let Some(rd) = r.degree() {
        if rd < dd {
            return Err(Error::Inconsistent("bivariate division was not exact".into()));
        }
        let c = r.coeffs()[rd].exact_div(lc)?;
        r = r.sub(&UniPoly::monomial(c.clone(), rd - dd).mul(d));
        q[rd - dd] = c;
    }
    Ok(UniPoly::new(q))
}

fn derivative(p: &KxyPoly) -> KxyPoly {
    p.derivative()
}

/// Yun's algorithm on the primitive part: `(factor, multiplicity)` with positive `y`-degree.
///
/// The `y`-content of the input is discarded; callers handle factors in `x` alone.
pub fn squarefree_decomposition(f: &BivariatePoly) -> Result<Vec<(BivariatePoly, u32)>> {
    let p = primitive_part(&f.to_y_poly())?;
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    if specializes_squarefree(&p)? {
        return Ok(vec![(BivariatePoly::from_y_poly(&p), 1)]);
    }
    let dp = derivative(&p);
    let a0 = gcd(&p, &dp)?;
    let mut b = exact_div(&p, &a0)?;
    let c = exact_div(&dp, &a0)?;
    let mut d = c.sub(&derivative(&b));
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = gcd(&b, &d)?;
        b = exact_div(&b, &a)?;
        let c = exact_div(&d, &a)?;
        d = c.sub(&derivative(&b));
        if a.degree().unwrap_or(0) > 0 {
            out.push((BivariatePoly::from_y_poly(&a), i));
        }
        i += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_polynomial;

    fn p(s: &str) -> BivariatePoly {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn gcd_of_products() {
        let a = p("(y^2 - x^3)*(y - x)^2").to_y_poly();
        let b = p("(y^2 - x^3)*(y + x)").to_y_poly();
        assert_eq!(BivariatePoly::from_y_poly(&gcd(&a, &b).unwrap()), p("y^2 - x^3"));
    }

    #[test]
    fn yun_separates_multiplicities() {
        let f = p("(y^2 - x^3)^2 * (y - x) * (x + 1)");
        let parts = squarefree_decomposition(&f).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (p("y - x"), 1));
        assert_eq!(parts[1], (p("y^2 - x^3"), 2));
        let g = p("y^3*(y - x^2)^3");
        let parts = squarefree_decomposition(&g).unwrap();
        assert_eq!(parts, vec![(p("y^2 - x^2*y"), 3)]);
    }
}
