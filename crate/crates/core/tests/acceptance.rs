//! Acceptance criteria, one test each. Every test prints a single
//! `[PASS]`/`[FAIL]` line with measured and expected values to stderr
//! (unbuffered, so it shows even when output capture is on).

use std::io::Write;

use pagraph::harness::criterion;

fn check(id: u32) {
    let result = criterion(id).expect("registered criterion").run();
    let _ = writeln!(std::io::stderr(), "\n{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_01_oracle_law_equality() {
    check(1);
}

#[test]
fn criterion_02_generator_vs_oracle() {
    check(2);
}

#[test]
fn criterion_03_increment_law() {
    check(3);
}

#[test]
fn criterion_04_expected_degree() {
    check(4);
}

#[test]
fn criterion_05_vertex_count() {
    check(5);
}

#[test]
fn criterion_06_tv_coupling() {
    check(6);
}

#[test]
fn criterion_07_samplewise_monotonicity() {
    check(7);
}

#[test]
fn criterion_08_ba_diameter_envelope() {
    check(8);
}

#[test]
fn criterion_09_rv_bounded_diameter() {
    check(9);
}

#[test]
fn criterion_10_clique_upper_bound() {
    check(10);
}

#[test]
fn criterion_11_clique_growth_slope() {
    check(11);
}

#[test]
fn criterion_12_isolated_path_first_moment() {
    check(12);
}

#[test]
fn criterion_13_vertex_path_first_moment() {
    check(13);
}

#[test]
fn criterion_14_observable_oracles() {
    check(14);
}

#[test]
fn criterion_15_oscillating_regime() {
    check(15);
}

#[test]
fn criterion_16_performance() {
    check(16);
}
