//! Seeded randomized invariants; case counts are pinned per property.

mod common;

use common::invariants::*;
use proptest::prelude::*;

fn check(r: Check) -> Result<(), TestCaseError> {
    r.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn padic_ring_laws(seed in any::<u64>()) { check(ring_laws(seed))?; }

    #[test]
    fn series_multiplication_kernels_agree(seed in any::<u64>()) { check(multiplication_kernels(seed))?; }

    #[test]
    fn series_inverse_and_square_root(seed in any::<u64>()) { check(inverse_and_sqrt(seed))?; }

    #[test]
    fn pade_half_gcd_matches_euclid(seed in any::<u64>()) { check(pade(seed))?; }

    #[test]
    fn cantor_group_laws_hold(seed in any::<u64>()) { check(cantor_group_laws(seed))?; }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn solutions_stable_under_extra_precision(seed in any::<u64>()) { check(precision_stability(seed))?; }

    #[test]
    fn newton_solver_matches_term_by_term(seed in any::<u64>()) { check(newton_matches_naive(seed))?; }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn multiplication_mode_invariants(seed in any::<u64>()) { check(multiplication_mode(seed, 20))?; }
}
