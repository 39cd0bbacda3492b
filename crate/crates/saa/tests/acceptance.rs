//! The acceptance suite: one test per criterion. Each prints a pass/fail
//! line (visible with `cargo test --test acceptance -- --nocapture`) and a
//! handful also enforce the intended time budget.

use std::time::Duration;

use saa::selftest::run_criterion;

fn run(id: usize, budget: Option<Duration>) {
    let result = run_criterion(id);
    println!("{}", result.line());
    assert!(result.passed, "{}", result.line());
    if let Some(budget) = budget {
        assert!(
            result.elapsed <= budget,
            "criterion {id} exceeded its budget: {:?} > {budget:?}",
            result.elapsed
        );
    }
}

#[test]
fn criterion_1_axiom_suite() {
    run(1, Some(Duration::from_secs(1)));
}

#[test]
fn criterion_2_series_duality() {
    run(2, Some(Duration::from_secs(30)));
}

#[test]
fn criterion_3_structure_constraints() {
    run(3, Some(Duration::from_secs(60)));
}

#[test]
fn criterion_4_canonical_label_invariance() {
    run(4, Some(Duration::from_secs(300)));
}

#[test]
fn criterion_5_census_goldens() {
    run(5, Some(Duration::from_secs(120)));
}

#[test]
fn criterion_6_group_laws() {
    run(6, Some(Duration::from_secs(60)));
}

#[test]
fn criterion_7_tau_type_goldens() {
    run(7, None);
}

#[test]
fn criterion_8_parameter_determinant_identity() {
    run(8, None);
}

#[test]
fn criterion_9_pairwise_separation() {
    run(9, None);
}
