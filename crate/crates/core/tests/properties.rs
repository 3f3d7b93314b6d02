//! Property suites for the monomial, order, occurrence and rewriting
//! layers, one test per suite.  Bodies live in `props/` and are shared with
//! the acceptance target.

mod props;

const CASES: usize = 1000;

#[test]
fn orders_are_admissible_under_random_compositions() {
    props::order_admissibility(CASES);
}

#[test]
fn straighten_is_idempotent_on_random_planar_trees() {
    props::straighten_idempotence(CASES);
}

#[test]
fn permutation_action_signs_compose() {
    props::permutation_signs(CASES);
}

#[test]
fn reduction_is_idempotent_linear_and_strategy_independent() {
    props::reduction_laws(CASES);
}

#[test]
fn occurrence_search_and_replacement_round_trip() {
    props::occurrence_round_trips(CASES);
}

#[test]
fn enumeration_matches_the_double_factorial_pattern() {
    props::enumeration_counts();
}

#[test]
fn deformed_almost_composites_never_grow_dimensions() {
    props::dimension_monotonicity(CASES);
}
