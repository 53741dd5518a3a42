//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use germ_core::bivariate::KxPoly;
use germ_core::{
    Arc, BivariatePoly, BranchGerm, CycloNumber, Error, ExpandOptions, PuiseuxSeries,
    Rational, Valuation,
};
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub const CONDUCTORS: [u32; 11] = [1, 2, 3, 4, 5, 6, 8, 10, 12, 20, 24];

/// A random nonzero element of `Q(zeta_n)` with small coefficients.
pub fn random_cyclo<R: Rng>(rng: &mut R, n: u32) -> CycloNumber {
    loop {
        let mut c = CycloNumber::rational(qi(0));
        let terms = if n == 1 { 1 } else { rng.gen_range(1..=2) };
        for _ in 0..terms {
            let k = rng.gen_range(0..n as i64);
            let r = q(rng.gen_range(-3..=3), rng.gen_range(1..=2));
            c = c.add(&CycloNumber::root_of_unity(n, k).scale(&r));
        }
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn random_rational_unit<R: Rng>(rng: &mut R) -> CycloNumber {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-3..=3);
    }
    CycloNumber::rational(q(n, rng.gen_range(1..=3)))
}

/// `t -> (t^m, psi)`, `m <= max_m`, exponents in `[m, max_exp]`, coefficients in `Q(zeta_n)`.
pub fn random_branch<R: Rng>(rng: &mut R, max_m: u32, max_exp: u32, n: u32) -> BranchGerm {
    let m = rng.gen_range(1..=max_m);
    let lo = m.max(1);
    let mut exps: Vec<u32> = (lo..=max_exp).filter(|_| rng.gen_bool(0.3)).collect();
    if exps.iter().fold(m, |g, &e| g.gcd(&e)) != 1 {
        let coprime: Vec<u32> = (lo..=max_exp).filter(|e| e.gcd(&m) == 1).collect();
        exps.push(*coprime.choose(rng).expect("a coprime exponent exists"));
    }
    exps.sort_unstable();
    exps.dedup();
    let terms = exps.into_iter().map(|e| (qi(e as i64), random_cyclo(rng, n))).collect();
    BranchGerm::new(m, PuiseuxSeries::exact(terms)).expect("generated branch is valid")
}

/// `psi(zeta_m^k t)`, built term by term.
pub fn conjugate(b: &BranchGerm, k: i64) -> PuiseuxSeries {
    let m = b.m();
    let terms = b
        .psi()
        .terms()
        .iter()
        .map(|(e, c)| {
            let j = e.to_integer().try_into().unwrap_or(0i64);
            (e.clone(), c.mul(&CycloNumber::root_of_unity(m, j * k)))
        })
        .collect();
    PuiseuxSeries::new(terms, b.psi().trunc().cloned())
}

/// Order of the branch's equation along the arc, from the product of `y(t) - psi(zeta^k t)`
/// over all conjugates (first coordinate `t^m`).
pub fn conjugate_product_order(b: &BranchGerm, a: &Arc) -> Valuation {
    let one = PuiseuxSeries::monomial(CycloNumber::from_int(1), qi(0));
    match a {
        Arc::YAxis { e, v } => {
            let y = v.mul(&PuiseuxSeries::monomial(CycloNumber::from_int(1), qi(*e as i64)));
            (0..b.m()).fold(one, |acc, _| acc.mul(&y)).valuation()
        }
        Arc::XNormalized { p, y } => {
            assert_eq!(*p, b.m(), "oracle expects first coordinate t^m");
            (0..b.m() as i64).fold(one, |acc, k| acc.mul(&y.sub(&conjugate(b, k)))).valuation()
        }
    }
}

/// The minimal polynomial `prod_k (y - psi(zeta_m^k x^(1/m)))` of an exact branch.
pub fn branch_polynomial(b: &BranchGerm) -> BivariatePoly {
    let m = b.m() as i64;
    // Coefficients in y of the running product, as series in t.
    let mut coeffs: Vec<PuiseuxSeries> = vec![PuiseuxSeries::monomial(CycloNumber::from_int(1), qi(0))];
    for k in 0..m {
        let c = conjugate(b, k).neg();
        let mut next = vec![PuiseuxSeries::zero(); coeffs.len() + 1];
        for (j, a) in coeffs.iter().enumerate() {
            next[j + 1] = next[j + 1].add(a);
            next[j] = next[j].add(&a.mul(&c));
        }
        coeffs = next;
    }
    let mut f = BivariatePoly::zero();
    for (j, s) in coeffs.iter().enumerate() {
        for (e, c) in s.terms() {
            let e = e.to_integer();
            let e: i64 = e.try_into().unwrap();
            assert_eq!(e % m, 0, "conjugate product has integral x-exponents");
            f.add_term((e / m) as u32, j as u32, c.clone());
        }
    }
    f
}

/// `ord_x Res_y(f, g)` through a fraction-free determinant of the Sylvester matrix over `K[x]`.
pub fn resultant_x_order(f: &BivariatePoly, g: &BivariatePoly) -> Option<usize> {
    let (fy, gy) = (f.to_y_poly(), g.to_y_poly());
    let (df, dg) = (fy.degree()?, gy.degree()?);
    let n = df + dg;
    let mut mat = vec![vec![KxPoly::zero(); n]; n];
    for r in 0..dg {
        for (i, c) in fy.coeffs().iter().enumerate() {
            mat[r][r + df - i] = c.clone();
        }
    }
    for r in 0..df {
        for (i, c) in gy.coeffs().iter().enumerate() {
            mat[dg + r][r + dg - i] = c.clone();
        }
    }
    bareiss(mat).order()
}

fn bareiss(mut a: Vec<Vec<KxPoly>>) -> KxPoly {
    let n = a.len();
    let mut sign = false;
    let mut prev = KxPoly::constant(CycloNumber::from_int(1));
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return KxPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// Runs `job` with expansion options whose truncation target is raised until the job
/// stops reporting short data.
pub fn with_truncation<T>(mut job: impl FnMut(&ExpandOptions) -> Result<T, Error>) -> Result<T, Error> {
    let mut target = qi(0);
    loop {
        let opts = ExpandOptions { target_trunc: target.clone(), ..ExpandOptions::default() };
        match job(&opts) {
            Err(Error::InsufficientTruncation(_)) if target < qi(256) => {
                target = (target * qi(2)).max(qi(8));
            }
            r => return r,
        }
    }
}

/// A random polynomial `y^d + sum c_ij x^i y^j` with `i + j >= d` when `j < d`, so no
/// coordinate change is needed and `f(0, y) = y^d`.
pub fn random_dense<R: Rng>(rng: &mut R, max_d: u32, max_i: u32) -> BivariatePoly {
    let d = rng.gen_range(1..=max_d);
    let mut f = BivariatePoly::monomial(CycloNumber::from_int(1), 0, d);
    for j in 0..d {
        for i in (d - j)..=max_i {
            if rng.gen_bool(0.15) {
                f.add_term(i, j, random_rational_unit(rng));
            }
        }
    }
    if f.terms().len() == 1 {
        f.add_term(max_i.max(d + 1), 0, CycloNumber::from_int(1));
    }
    f
}

/// A product of powers of branch polynomials and powers of lines `y - c x`.
pub fn random_product<R: Rng>(rng: &mut R, max_factors: usize, n: u32) -> BivariatePoly {
    let count = rng.gen_range(1..=max_factors);
    let mut f = BivariatePoly::constant(CycloNumber::from_int(1));
    for _ in 0..count {
        let factor = if rng.gen_bool(0.3) {
            let c = if rng.gen_bool(0.5) { CycloNumber::from_int(0) } else { random_rational_unit(rng) };
            BivariatePoly::y().sub(&BivariatePoly::x().scale(&c))
        } else {
            branch_polynomial(&random_branch(rng, 3, 9, n))
        };
        let mult = if rng.gen_bool(0.25) { 2 } else { 1 };
        f = f.mul(&factor.pow(mult));
    }
    f
}

/// An arc `(t^m, y)` that follows a random conjugate of `b` up to a random exponent and
/// then deviates; occasionally the conjugate itself, or a y-axis arc.
pub fn random_arc<R: Rng>(rng: &mut R, b: &BranchGerm, max_exp: u32, n: u32) -> Arc {
    if rng.gen_bool(0.05) {
        let v = PuiseuxSeries::exact(vec![(qi(0), random_cyclo(rng, n))]);
        return Arc::y_axis(rng.gen_range(1..=3), v).unwrap();
    }
    let k = rng.gen_range(0..b.m() as i64);
    let conj = conjugate(b, k);
    if rng.gen_bool(0.05) {
        return Arc::x_normalized(b.m(), conj).unwrap();
    }
    let cut = qi(rng.gen_range(1..=max_exp as i64 + 1));
    let kept: Vec<_> = conj.terms().iter().filter(|(e, _)| *e < cut).cloned().collect();
    let j = rng.gen_range(1..=max_exp as i64 + 2);
    let bump = PuiseuxSeries::monomial(random_cyclo(rng, n), qi(j));
    Arc::x_normalized(b.m(), PuiseuxSeries::exact(kept).add(&bump)).unwrap()
}

pub fn valuation_to_ext(v: &Valuation) -> germ_core::ExtRational {
    match v {
        Valuation::Finite(q) => germ_core::ExtRational::Finite(q.clone()),
        Valuation::Infinite => germ_core::ExtRational::Infinity,
        Valuation::AboveTrunc(_) => panic!("exact data has no truncation"),
    }
}

/// Germ pairs with known verdicts: `(left, right, equivalent)`.
pub fn corpus() -> Vec<(&'static str, serde_json::Value, serde_json::Value, bool)> {
    use serde_json::json;
    let poly = |s: &str| json!({ "polynomial": s });
    let br = |m: u32, exps: &[(i64, &str)], mult: u32| {
        let psi: Vec<_> = exps.iter().map(|(e, c)| json!({ "exp": e, "coeff": c })).collect();
        json!({ "m": m, "psi": psi, "mult": mult })
    };
    vec![
        ("cusp vs sheared cusp", poly("y^2 - x^3"), poly("(y + 2*x)^2 - x^3"), true),
        ("cusp vs swapped cusp", poly("y^2 - x^3"), poly("x^2 - y^3"), true),
        ("cusp vs branch data", poly("y^2 - x^3"), json!({ "branches": [br(2, &[(3, "1")], 1)] }), true),
        (
            "factor reordering",
            json!({ "branches": [br(1, &[(2, "1")], 1), br(2, &[(3, "1")], 2), br(1, &[(1, "-1")], 1)] }),
            json!({ "branches": [br(2, &[(3, "1")], 2), br(1, &[(1, "-1")], 1), br(1, &[(2, "1")], 1)] }),
            true,
        ),
        (
            "linear change of a product",
            poly("(y^2 - x^3)*(y - x^2)"),
            poly("((x + y)^2 - (x - 2*y)^3)*((x + y) - (x - 2*y)^2)"),
            true,
        ),
        ("higher terms", poly("y^3 - x^4"), poly("y^3 - x^4 - x^5 + 2*x^3*y"), true),
        ("tacnode forms", poly("y^2 - x^4"), poly("y^2 - x^4 - x^5"), true),
        ("non-reduced higher terms", poly("(y^2 - x^3)^2"), poly("(y^2 - x^3 - x^4)^2"), true),
        ("swapped multiplicities", poly("y*(y - x)^2"), poly("y^2*(y - x)"), true),
        ("(3,1) vs (5,1)", poly("y^2 - x^3"), poly("y^2 - x^5"), false),
        ("f vs f^2", poly("y^2 - x^3"), poly("(y^2 - x^3)^2"), false),
        ("intersection mismatch", poly("y*(y - x^2)"), poly("y*(y - x^3)"), false),
        ("factor count", poly("y"), poly("y*(y - x)"), false),
        ("(4,1) vs (5,1) in m = 3", poly("y^3 - x^4"), poly("y^3 - x^5"), false),
        ("lines vs tangent parabolas", poly("(y - x)*(y + x)"), poly("(y - x^2)*(y + x^2)"), false),
    ]
}

/// A random arc `(t^p, y)` with small rational coefficients and integer exponents.
pub fn random_plain_arc<R: Rng>(rng: &mut R, max_p: u32, max_exp: u32) -> Arc {
    let p = rng.gen_range(1..=max_p);
    let mut terms = Vec::new();
    for e in 1..=max_exp {
        if rng.gen_bool(0.3) {
            terms.push((qi(e as i64), random_rational_unit(rng)));
        }
    }
    Arc::x_normalized(p, PuiseuxSeries::exact(terms)).unwrap()
}
