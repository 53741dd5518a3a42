//! Real-analytic arcs and irreducible branch parameterizations.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::bivariate::BivariatePoly;
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::ring::{format_rational, int, Rational};
use crate::series::{PuiseuxSeries, Valuation};

/// A half-branch parameterization through the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arc {
    /// `t -> (t^p, y(t))`.
    XNormalized { p: u32, y: PuiseuxSeries },
    /// `t -> (0, t^e v(t))` with `v(0) != 0`.
    YAxis { e: u32, v: PuiseuxSeries },
}

impl Arc {
    pub fn x_normalized(p: u32, y: PuiseuxSeries) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidArc("first coordinate exponent must be positive".into()));
        }
        if y.terms().iter().any(|(e, _)| *e <= Rational::zero()) {
            return Err(Error::InvalidArc("second coordinate must vanish at t = 0".into()));
        }
        Ok(Arc::XNormalized { p, y })
    }

    pub fn y_axis(e: u32, v: PuiseuxSeries) -> Result<Self> {
        if e == 0 {
            return Err(Error::InvalidArc("y-axis arc exponent must be positive".into()));
        }
        if v.valuation() != Valuation::Finite(Rational::zero()) {
            return Err(Error::InvalidArc("y-axis arc needs a unit v with v(0) != 0".into()));
        }
        if !v.has_nonnegative_exponents() {
            return Err(Error::InvalidArc("unit v must have non-negative exponents".into()));
        }
        Ok(Arc::YAxis { e, v })
    }

    /// Order `mu` of `|gamma(t)|` at `t = 0`.
    pub fn size_order(&self) -> Result<Rational> {
        match self {
            Arc::YAxis { e, .. } => Ok(int(*e as i64)),
            Arc::XNormalized { p, y } => {
                let p = int(*p as i64);
                match y.valuation() {
                    Valuation::Finite(v) => Ok(v.min(p)),
                    Valuation::Infinite => Ok(p),
                    Valuation::AboveTrunc(t) if t >= p => Ok(p),
                    Valuation::AboveTrunc(t) => Err(Error::truncation(format!(
                        "arc second coordinate unknown below t^{}",
                        format_rational(&t)
                    ))),
                }
            }
        }
    }

    /// Rewrites an x-normalized arc so that its first coordinate is `t^m`.
    pub fn with_first_exponent(&self, m: u32) -> Result<Self> {
        match self {
            Arc::XNormalized { p, y } => Ok(Arc::XNormalized { p: m, y: y.reparameterize(m, *p) }),
            Arc::YAxis { .. } => Err(Error::InvalidArc("a y-axis arc has no x-normalized form".into())),
        }
    }
}

/// `(1 + u)^alpha` up to `t^bound`, for `u` of positive valuation.
fn binomial_power(u: &PuiseuxSeries, alpha: &Rational, bound: &Rational) -> PuiseuxSeries {
    let one = PuiseuxSeries::monomial(CycloNumber::from_int(1), Rational::zero());
    let mut acc = one.truncate(bound);
    let u = u.truncate(bound);
    let v = match u.valuation() {
        Valuation::Finite(v) => v,
        _ => return acc,
    };
    let (mut term, mut coeff) = (one, Rational::one());
    let mut i = 1i64;
    while &v * int(i) <= *bound {
        coeff = coeff * (alpha - int(i - 1)) / int(i);
        term = term.mul(&u);
        acc = acc.add(&term.scale(&CycloNumber::rational(coeff.clone())));
        i += 1;
    }
    acc
}

/// `sum c_e g^e` for a series with non-negative integer exponents.
fn compose(f: &PuiseuxSeries, g: &PuiseuxSeries) -> PuiseuxSeries {
    let mut acc = PuiseuxSeries::new(Vec::new(), f.trunc().map(|t| t * g.valuation().finite().cloned().unwrap_or(int(1))));
    let mut power = PuiseuxSeries::monomial(CycloNumber::from_int(1), Rational::zero());
    let mut at = 0u32;
    for (e, c) in f.terms() {
        let e = e.to_integer().to_u32().expect("non-negative integer exponent");
        power = power.mul(&g.pow(e - at));
        at = e;
        acc = acc.add(&power.scale(c));
    }
    acc
}

impl Arc {
    /// Rewrites `t -> (x(t), y(t))` as an arc of the form `(s^n, Y(s))`, or a y-axis arc
    /// when `x = 0`. `Y` is computed up to `s^bound`; roots of the leading coefficient of
    /// `x` are taken in the cyclotomic tower up to `cap`.
    pub fn from_components(x: &PuiseuxSeries, y: &PuiseuxSeries, bound: &Rational, cap: u32) -> Result<Arc> {
        let d = x.exponent_denominator().lcm(&y.exponent_denominator());
        let d = u32::try_from(d).map_err(|_| Error::InvalidArc("exponent denominators are too large".into()))?;
        let (x, y) = (x.reparameterize(d, 1), y.reparameterize(d, 1));
        if y.terms().iter().any(|(e, _)| *e <= Rational::zero()) {
            return Err(Error::InvalidArc("second coordinate must vanish at t = 0".into()));
        }
        let n = match x.valuation() {
            Valuation::Infinite => {
                return match y.valuation() {
                    Valuation::Finite(e) => {
                        let v = y.shift(&-e.clone());
                        Arc::y_axis(e.to_integer().to_u32().expect("integer exponent"), v)
                    }
                    Valuation::Infinite => Err(Error::InvalidArc("the constant arc has no order".into())),
                    Valuation::AboveTrunc(_) => Err(Error::truncation("second coordinate has no known terms")),
                }
            }
            Valuation::AboveTrunc(_) => return Err(Error::truncation("first coordinate has no known terms")),
            Valuation::Finite(n) if n <= Rational::zero() => {
                return Err(Error::InvalidArc("first coordinate must vanish at t = 0".into()))
            }
            Valuation::Finite(n) => n.to_integer().to_u32().expect("integer exponent"),
        };
        let c = x.leading_coeff().expect("finite valuation").clone();
        let k = crate::radical::nth_root(&c, n, cap)
            .ok_or_else(|| Error::UnsupportedExtension { face: format!("z^{n} - ({c})"), cap })?;
        let one = PuiseuxSeries::monomial(CycloNumber::from_int(1), Rational::zero());
        let u = x.shift(&int(-(n as i64))).scale(&c.inv()?).sub(&one);
        let rho = binomial_power(&u, &Rational::new((-1).into(), (n as i64).into()), bound);
        // s = k t (1 + u)^(1/n); invert by fixed point t = (s / k) rho(t).
        let lead = PuiseuxSeries::monomial(k.inv()?, int(1));
        let next = bound + int(1);
        let mut t_of_s = lead.truncate(&next);
        let steps = next.ceil().to_integer().to_u32().unwrap_or(0) + 1;
        for _ in 0..steps {
            t_of_s = lead.mul(&compose(&rho, &t_of_s)).truncate(&next);
        }
        Arc::x_normalized(n, compose(&y, &t_of_s).truncate(bound))
    }

    /// The arc in coordinates where `x` has been replaced by `x + a y` (the inverse
    /// substitution is applied to the points).
    pub fn sheared(&self, a: &Rational, bound: &Rational, cap: u32) -> Result<Arc> {
        let a = CycloNumber::rational(a.clone());
        let (x, y) = match self {
            Arc::XNormalized { p, y } => {
                (PuiseuxSeries::monomial(CycloNumber::from_int(1), int(*p as i64)), y.clone())
            }
            Arc::YAxis { e, v } => {
                (PuiseuxSeries::zero(), v.shift(&int(*e as i64)))
            }
        };
        Arc::from_components(&x.sub(&y.scale(&a)), &y, bound, cap)
    }
}

/// Order `mu` of `|a(t)|`.
pub fn arc_size_order(a: &Arc) -> Result<Rational> {
    a.size_order()
}

/// An irreducible branch `t -> (t^m, psi(t))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchGerm {
    m: u32,
    psi: PuiseuxSeries,
}

impl BranchGerm {
    /// Validates the parameterization: integer exponents `> 0`, `ord psi >= m` when
    /// `m >= 2` (x-axis not tangent to the y-axis), and `gcd(m, support) = 1` when exact.
    pub fn new(m: u32, psi: PuiseuxSeries) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidBranch("multiplicity m must be positive".into()));
        }
        for (e, _) in psi.terms() {
            if !e.is_integer() || *e <= Rational::zero() {
                return Err(Error::InvalidBranch(format!(
                    "psi exponents must be positive integers, got {}",
                    format_rational(e)
                )));
            }
        }
        if m >= 2 {
            let m_q = int(m as i64);
            match psi.valuation() {
                Valuation::Finite(v) if v < m_q => {
                    return Err(Error::NotTransverse { m, order: format_rational(&v) })
                }
                Valuation::Infinite => {
                    return Err(Error::NotIrreducible(format!("psi = 0 with m = {m} is a multiple line")))
                }
                Valuation::AboveTrunc(t) if t < m_q => {
                    return Err(Error::truncation("psi truncated below the multiplicity"));
                }
                _ => {}
            }
        }
        if psi.is_exact() {
            let g = psi
                .terms()
                .iter()
                .filter_map(|(e, _)| e.numer().to_u64())
                .fold(m as u64, |g, e| g.gcd(&e));
            if g != 1 {
                return Err(Error::NotIrreducible(format!(
                    "gcd of m = {m} and the exponents of psi is {g}, the parameterization is not primitive"
                )));
            }
        }
        Ok(BranchGerm { m, psi })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn psi(&self) -> &PuiseuxSeries {
        &self.psi
    }

    /// `psi(zeta_m^k t)`: the k-th conjugate parameterization.
    pub fn conjugate(&self, k: i64) -> PuiseuxSeries {
        self.psi
            .scale_variable(self.m, k)
            .expect("branch exponents are integers by construction")
    }

    /// `prod_k (y - psi(zeta_m^k x^(1/m)))`, the reduced equation of an exact branch.
    pub fn defining_polynomial(&self) -> Result<BivariatePoly> {
        if !self.psi.is_exact() {
            return Err(Error::truncation("the defining polynomial needs an exact parameterization"));
        }
        let one = PuiseuxSeries::monomial(CycloNumber::from_int(1), Rational::zero());
        let mut coeffs = vec![one];
        for k in 0..self.m as i64 {
            let root = self.conjugate(k).neg();
            let mut next = vec![PuiseuxSeries::zero(); coeffs.len() + 1];
            for (j, c) in coeffs.iter().enumerate() {
                next[j + 1] = next[j + 1].add(c);
                next[j] = next[j].add(&c.mul(&root));
            }
            coeffs = next;
        }
        let mut f = BivariatePoly::zero();
        let m = int(self.m as i64);
        for (j, s) in coeffs.iter().enumerate() {
            for (e, c) in s.terms() {
                let i = e / &m;
                if !i.is_integer() {
                    return Err(Error::Inconsistent(format!("conjugate product has the exponent {} in x", format_rational(&i))));
                }
                f.add_term(i.to_integer().to_u32().expect("small exponent"), j as u32, c.clone());
            }
        }
        Ok(f)
    }

    /// The branch itself as an arc.
    pub fn as_arc(&self) -> Arc {
        Arc::XNormalized { p: self.m, y: self.psi.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycloNumber;

    fn mono(e: i64) -> PuiseuxSeries {
        PuiseuxSeries::monomial(CycloNumber::from_int(1), int(e))
    }

    #[test]
    fn size_order_examples() {
        assert_eq!(Arc::x_normalized(2, mono(3)).unwrap().size_order().unwrap(), int(2));
        assert_eq!(Arc::x_normalized(2, mono(2)).unwrap().size_order().unwrap(), int(2));
        let unit = PuiseuxSeries::monomial(CycloNumber::from_int(1), int(0));
        assert_eq!(Arc::y_axis(1, unit).unwrap().size_order().unwrap(), int(1));
        assert_eq!(Arc::x_normalized(3, PuiseuxSeries::zero()).unwrap().size_order().unwrap(), int(3));
        let unknown = PuiseuxSeries::new(vec![], Some(int(1)));
        assert!(matches!(
            Arc::x_normalized(3, unknown).unwrap().size_order(),
            Err(Error::InsufficientTruncation(_))
        ));
    }

    #[test]
    fn branch_validation() {
        assert!(BranchGerm::new(2, mono(3)).is_ok());
        assert!(BranchGerm::new(1, PuiseuxSeries::zero()).is_ok());
        assert!(matches!(BranchGerm::new(4, mono(6)), Err(Error::NotIrreducible(_))));
        assert!(matches!(BranchGerm::new(3, mono(2)), Err(Error::NotTransverse { .. })));
        assert!(matches!(BranchGerm::new(0, mono(2)), Err(Error::InvalidBranch(_))));
    }

    fn series(src: &str) -> PuiseuxSeries {
        crate::parser::parse_univariate(src, "t").unwrap()
    }

    #[test]
    fn components_are_normalized() {
        let bound = int(8);
        let a = Arc::from_components(&series("t^2 + t^3"), &series("t^3"), &bound, 120).unwrap();
        let Arc::XNormalized { p, y } = &a else { panic!("expected an x-normalized arc") };
        assert_eq!(*p, 2);
        // x = s^2 means t = s (1 + t)^(-1/2), so y = s^3 - 3/2 s^4 + ...
        assert_eq!(y.coeff(&int(3)), Some(CycloNumber::from_int(1)));
        assert_eq!(y.coeff(&int(4)), Some(CycloNumber::rational(crate::ring::rat(-3, 2))));
        assert_eq!(y.trunc(), Some(&bound));
        let axis = Arc::from_components(&PuiseuxSeries::zero(), &series("2*t^2 + t^3"), &bound, 120).unwrap();
        assert!(matches!(axis, Arc::YAxis { e: 2, .. }));
        assert!(matches!(
            Arc::from_components(&series("2*t^3"), &series("t^4"), &bound, 120),
            Err(Error::UnsupportedExtension { .. })
        ));
    }

    #[test]
    fn shear_preserves_normalized_order() {
        use crate::parser::parse_polynomial;
        let f = parse_polynomial("x^2 - y^3 + x*y^2").unwrap();
        let a = crate::ring::rat(1, 2);
        let g = f.linear_change(&int(1), &a, &int(0), &int(1));
        for (p, y) in [(1, "t"), (1, "2*t"), (2, "t^3 - t^4"), (3, "t^2")] {
            let arc = Arc::x_normalized(p, series(y)).unwrap();
            let moved = arc.sheared(&a, &int(24), 120).unwrap();
            let (xs, ys) = match &moved {
                Arc::XNormalized { p, y } => (PuiseuxSeries::monomial(CycloNumber::from_int(1), int(*p as i64)), y.clone()),
                Arc::YAxis { e, v } => (PuiseuxSeries::zero(), v.shift(&int(*e as i64))),
            };
            let before = f.compose_series(&PuiseuxSeries::monomial(CycloNumber::from_int(1), int(p as i64)), &series(y));
            let after = g.compose_series(&xs, &ys);
            let nb = before.valuation().finite().unwrap() / arc.size_order().unwrap();
            let na = after.valuation().finite().unwrap() / moved.size_order().unwrap();
            assert_eq!(nb, na, "arc ({p}, {y})");
        }
    }
}
