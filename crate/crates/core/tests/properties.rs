//! Randomized checks of the algebraic laws the library relies on. 1000 cases per property.

mod common;

use common::laws::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(config())]

    #[test]
    fn merge_closure_is_a_closure_operator(input in merge_input()) {
        merge_closure_laws(input)?;
    }

    #[test]
    fn plc_closure_is_a_closure_operator(input in hypergraph_pair()) {
        plc_closure_laws(input)?;
    }

    #[test]
    fn incremental_delta_matches_scratch(input in delta_input()) {
        incremental_delta(input)?;
    }

    #[test]
    fn v_x_is_order_independent_with_unit_steps(sys in xsystem(7)) {
        v_x_laws(sys)?;
    }

    #[test]
    fn rank_is_below_v_x_for_x_matroids(input in x_matroid_input()) {
        rank_below_v_x(input)?;
    }

    #[test]
    fn dependency_leq_matches_subset_check(input in leq_input()) {
        dependency_leq_brute(input)?;
    }

    #[test]
    fn canonical_form_is_relabelling_invariant(input in relabel_input()) {
        canonical_invariance(input)?;
    }

    #[test]
    fn orbits_partition_invariant_sets(c in orbit_input()) {
        orbits_partition(c)?;
    }
}
