mod common;

use common::*;
use germ_core::{
    arc_size_order, contact, estimate_contact, estimate_order, expand, order_of_germ, parse_polynomial, parse_univariate,
    Arc, BivariatePoly, BranchGerm, ExtRational, Rational,
};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 0.05;

/// Symbolic order in the arc's own parameter.
fn symbolic_order(f: &BivariatePoly, a: &Arc) -> Option<Rational> {
    let nu = with_truncation(|opts| {
        let r = expand(f, opts)?;
        assert!(r.applied_shear.is_none());
        order_of_germ(&r.germ, a)
    })
    .ok()?;
    nu.finite().map(|n| n * arc_size_order(a).unwrap())
}

fn arc(p: u32, y: &str) -> Arc {
    Arc::x_normalized(p, parse_univariate(y, "t").unwrap()).unwrap()
}

fn check_order(f: &BivariatePoly, a: &Arc, nu: &Rational) {
    let s = estimate_order(f, a, 1e-6, 1e-3, 16).unwrap();
    let nu = nu.to_f64().unwrap();
    assert!((s.slope - nu).abs() <= TOL, "f = {f}, arc = {a:?}: slope {} vs {nu}", s.slope);
}

#[test]
fn standard_family_orders() {
    for (f, arcs) in [
        ("y^2 - x^3", vec![arc(1, "0"), arc(1, "t"), arc(2, "t^3 + t^4"), arc(2, "t^2")]),
        ("y^2 - x^4 - x^5", vec![arc(1, "t^2"), arc(1, "t^2 + t^3"), arc(1, "3*t"), arc(2, "t^5")]),
    ] {
        let f = parse_polynomial(f).unwrap();
        for a in arcs {
            let nu = symbolic_order(&f, &a).unwrap();
            check_order(&f, &a, &nu);
        }
    }
}

#[test]
fn random_germ_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut done = 0;
    while done < 20 {
        let f = if rng.gen_bool(0.5) { random_dense(&mut rng, 3, 5) } else { random_product(&mut rng, 2, 1) };
        let a = random_plain_arc(&mut rng, 3, 6);
        match symbolic_order(&f, &a) {
            Some(nu) if nu <= qi(12) => {
                check_order(&f, &a, &nu);
                done += 1;
            }
            _ => continue,
        }
    }
}

#[test]
fn contacts_up_to_four() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut done = 0;
    while done < 20 {
        let b = random_branch(&mut rng, 3, 8, 1);
        let a = random_arc(&mut rng, &b, 8, 1);
        let c = match contact(&a, &b).unwrap() {
            ExtRational::Finite(c) if c <= qi(4) => c.to_f64().unwrap(),
            _ => continue,
        };
        let s = estimate_contact(&a, &b, 1e-6, 1e-3, 16, 64).unwrap();
        assert!((s.slope - c).abs() <= TOL, "branch {b:?}, arc {a:?}: slope {} vs {c}", s.slope);
        done += 1;
    }
    let cusp = BranchGerm::new(2, parse_univariate("t^3", "t").unwrap()).unwrap();
    let s = estimate_contact(&arc(2, "t^3 + t^8"), &cusp, 1e-6, 1e-3, 16, 64).unwrap();
    assert!((s.slope - 4.0).abs() <= TOL);
}
