mod common;

use common::*;
use germ_core::json::read_germ;
use germ_core::{
    decide_equivalence, expand, invariant_signature, parse_polynomial, verify_certificate, BivariatePoly, CycloNumber,
    Error, ExpandOptions, GermPresentation, Verdict, Witness,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn germ_of(f: &BivariatePoly) -> GermPresentation {
    expand(f, &ExpandOptions::default()).unwrap().germ
}

#[test]
fn corpus_verdicts() {
    let opts = ExpandOptions::default();
    for (name, a, b, expected) in corpus() {
        let (ga, gb) = (read_germ(&a, &opts).unwrap().germ, read_germ(&b, &opts).unwrap().germ);
        let cert = decide_equivalence(&ga, &gb).unwrap();
        assert_eq!(cert.is_equivalent(), expected, "{name}: {cert:?}");
        if let Some(sigma) = &cert.sigma {
            assert!(verify_certificate(&ga, &gb, sigma).unwrap(), "{name}");
        }
        assert_eq!(invariant_signature(&ga) == invariant_signature(&gb), expected, "{name}");
    }
}

#[test]
fn witnesses_follow_check_order() {
    let g = |s: &str| germ_of(&parse_polynomial(s).unwrap());
    let w = |a: &str, b: &str| decide_equivalence(&g(a), &g(b)).unwrap().witness.unwrap();
    assert_eq!(w("y", "y*(y - x)"), Witness::FactorCountMismatch { left: 1, right: 2 });
    assert!(matches!(w("y^2 - x^3", "(y^2 - x^3)^2"), Witness::MultiplicityMultisetMismatch { .. }));
    assert_eq!(w("y^2 - x^3", "y^2 - x^5"), Witness::PuiseuxPairMismatch { i: 0 });
    assert!(matches!(w("y*(y - x^2)", "y*(y - x^3)"), Witness::IntersectionMatrixMismatch { .. }));
}

fn random_linear<R: Rng>(rng: &mut R) -> [i64; 4] {
    loop {
        let m: [i64; 4] = [rng.gen_range(-2..=2), rng.gen_range(-2..=2), rng.gen_range(-2..=2), rng.gen_range(-2..=2)];
        if m[0] * m[3] - m[1] * m[2] != 0 {
            return m;
        }
    }
}

fn random_unit<R: Rng>(rng: &mut R) -> BivariatePoly {
    let mut u = BivariatePoly::constant(random_rational_unit(rng));
    for (i, j) in [(1, 0), (0, 1), (1, 1), (2, 0)] {
        if rng.gen_bool(0.5) {
            u.add_term(i, j, random_rational_unit(rng));
        }
    }
    u
}

/// Pairs from the corpus given as polynomials, with their verdicts.
fn polynomial_pairs() -> Vec<(BivariatePoly, BivariatePoly, bool)> {
    corpus()
        .into_iter()
        .filter_map(|(_, a, b, eq)| {
            let pa = parse_polynomial(a.get("polynomial")?.as_str()?).ok()?;
            let pb = parse_polynomial(b.get("polynomial")?.as_str()?).ok()?;
            Some((pa, pb, eq))
        })
        .collect()
}

#[test]
fn verdicts_survive_linear_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let pairs = polynomial_pairs();
    let (mut done, mut skipped) = (0, 0);
    while done < 30 {
        let (a, b, eq) = pairs.choose(&mut rng).unwrap();
        let [p, q, r, s] = random_linear(&mut rng);
        let moved = b.linear_change(&qi(p), &qi(q), &qi(r), &qi(s));
        // Roots such as 16^(1/3) leave every cyclotomic field; such changes are redrawn.
        let gm = match expand(&moved, &ExpandOptions::default()) {
            Ok(r) => r.germ,
            Err(Error::UnsupportedExtension { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => panic!("{moved}: {e}"),
        };
        let cert = decide_equivalence(&germ_of(a), &gm).unwrap();
        assert_eq!(cert.is_equivalent(), *eq, "{a} vs {moved}");
        done += 1;
    }
    assert!(skipped < 30, "{skipped} coordinate changes left the cyclotomic tower");
}

#[test]
fn verdicts_survive_factor_reordering() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let pairs = polynomial_pairs();
    for _ in 0..30 {
        let (a, b, eq) = pairs.choose(&mut rng).unwrap();
        let gb = germ_of(b);
        let mut perm: Vec<usize> = (0..gb.len()).collect();
        perm.shuffle(&mut rng);
        let cert = decide_equivalence(&germ_of(a), &gb.permuted(&perm).unwrap()).unwrap();
        assert_eq!(cert.is_equivalent(), *eq);
        if let Some(sigma) = cert.sigma {
            assert!(verify_certificate(&germ_of(a), &gb.permuted(&perm).unwrap(), &sigma).unwrap());
        }
    }
}

#[test]
fn verdicts_survive_unit_multiples() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let pairs = polynomial_pairs();
    for _ in 0..30 {
        let (a, b, eq) = pairs.choose(&mut rng).unwrap();
        let scaled = b.mul(&random_unit(&mut rng)).scale(&CycloNumber::root_of_unity(4, rng.gen_range(0..4)));
        let cert = decide_equivalence(&germ_of(a), &germ_of(&scaled)).unwrap();
        assert_eq!(cert.verdict == Verdict::Equivalent, *eq, "{a} vs {scaled}");
    }
}
