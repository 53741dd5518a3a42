mod common;

use common::*;
use germ_core::{characteristic_data, order_along_halfbranch, order_along_parameterized, ExtRational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check_instance(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = CONDUCTORS[(seed % CONDUCTORS.len() as u64) as usize];
    let b = random_branch(&mut rng, 6, 14, n);
    let a = random_arc(&mut rng, &b, 14, n);
    let formula = order_along_parameterized(&b, &a).unwrap();
    let product = valuation_to_ext(&conjugate_product_order(&b, &a));
    prop_assert_eq!(&formula.nu, &product, "branch {:?} arc {:?}", b, a);

    let norm = order_along_halfbranch(&b, &a).unwrap();
    prop_assert_eq!(norm.nu.scale(&formula.mu), formula.nu.clone());
    if let ExtRational::Finite(c) = &norm.contact {
        let chars = characteristic_data(&b).unwrap();
        let mc = c * qi(b.m() as i64);
        prop_assert!(chars.beta_at(norm.k).map_or(false, |bk| qi(bk as i64) <= mc));
        prop_assert!(chars.beta_at(norm.k + 1).map_or(true, |bk1| mc < qi(bk1 as i64)));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn order_formula_matches_conjugate_product(seed in any::<u64>()) {
        check_instance(seed)?;
    }

    #[test]
    fn characteristic_data_is_consistent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_branch(&mut rng, 6, 14, 12);
        let c = characteristic_data(&b).unwrap();
        prop_assert!(c.is_consistent());
        prop_assert_eq!(c.msub.iter().product::<u64>(), b.m() as u64);
    }
}

#[test]
fn worked_orders() {
    let cusp = germ_core::BranchGerm::new(2, germ_core::parse_univariate("t^3", "t").unwrap()).unwrap();
    let arc = germ_core::Arc::x_normalized(2, germ_core::parse_univariate("t^3 + t^4", "t").unwrap()).unwrap();
    let r = order_along_parameterized(&cusp, &arc).unwrap();
    assert_eq!(r.nu, ExtRational::Finite(qi(7)));
    assert_eq!(valuation_to_ext(&conjugate_product_order(&cusp, &arc)), r.nu);
}
