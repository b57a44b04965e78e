//! Engine cells against the brute-force reference on small random inputs.

mod common;

use lcsocle::socle::{star_socle_dim, WindowPolicy};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn agree(case: &common::Case, ell: u32, hi: i64) -> Result<(), TestCaseError> {
    let (ring, f) = common::build_case(case);
    let rep = star_socle_dim(&ring, &f, ell, WindowPolicy::fixed(hi)).unwrap();
    prop_assert_eq!(rep.per_degree.len() as i64, hi + 1);
    for (&d, c) in &rep.per_degree {
        prop_assert_eq!(
            (c.component_dim, c.t_socle_dim, c.star_socle_dim),
            common::oracle_cell(case, ell, d),
            "ell {} degree {} for {}",
            ell,
            d,
            f.format(&ring)
        );
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_polynomial_cases(seed in any::<u64>(), unit in any::<bool>(), extra in 0u32..2) {
        let case = common::random_case(&mut ChaCha8Rng::seed_from_u64(seed), unit);
        let ell = case.weights.len() as u32 + extra;
        agree(&case, ell, 8)?;
    }
}

#[test]
fn semigroup_membership_matches_layers() {
    let case = common::example12_case();
    let gens = case.gens.clone().unwrap();
    for d in 0..=16 {
        for t in common::t_monomials(&case, d) {
            assert!(common::in_semigroup(&t, &gens), "{t:?}");
        }
    }
    assert!(!common::in_semigroup(&[2, 2], &gens));
}

#[test]
fn hartshorne_per_degree_small() {
    let case = common::hartshorne_case();
    for ell in 2..=4 {
        agree(&case, ell, 6).unwrap();
    }
}

#[test]
fn rank_of_free_piece() {
    for n in 1..=3 {
        for ell in 1..=8u32 {
            assert_eq!(
                lcsocle::toplc::inverse_basis(n, ell).len() as u64,
                common::binomial(ell as u64 - 1, n as u64 - 1)
            );
        }
    }
}
