//! Randomized invariants over the public API.

mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cover_positions_rotate_with_the_word(case in cover_case()) {
        check_cover_rotation(case)?;
    }

    #[test]
    fn canonical_rotation_is_idempotent(x in cyclic_word(), r in 0isize..16) {
        check_canonical((x, r))?;
    }

    #[test]
    fn remove_m_equivalence(case in remove_m_case()) {
        check_remove_m(case)?;
    }

    #[test]
    fn minus_one_has_one_representation(counts in count_vector()) {
        check_minus_one(counts)?;
    }

    #[test]
    fn single_letter_runs_count_letters_and_diamond_shares(u in cyclic_word(), n in 1usize..=4) {
        check_single_runs((u, n))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symmetries_preserve_validity(case in symmetry_case()) {
        check_symmetry(case)?;
    }

    #[test]
    fn cross_joins_keep_windows(case in cross_join_case()) {
        check_cross_join(case)?;
    }
}
