//! Acceptance suite: runs every criterion at its stated bounds and
//! tolerance, printing one pass/fail line per criterion. All tolerances
//! are exact; the stated runtime budgets are asserted where given.

use cycat::stable::InjectFault;
use cycat::verify::{run_criterion, VerifyBounds, CRITERIA};

fn full_bounds() -> VerifyBounds {
    VerifyBounds::default()
}

fn report(id: usize, bounds: &VerifyBounds) -> cycat::verify::CriterionResult {
    let r = run_criterion(id, bounds);
    println!(
        "[{}] criterion {:>2}: {:<42} {:>8} ms  {}",
        if r.passed { "PASS" } else { "FAIL" },
        r.id,
        CRITERIA[r.id - 1],
        r.millis,
        r.details
    );
    r
}

#[test]
fn criterion_01_cocycle_algebra() {
    let r = report(1, &full_bounds());
    assert!(r.passed, "{}", r.details);
    assert!(
        r.millis < 5_000,
        "runtime budget 5 s exceeded: {} ms",
        r.millis
    );
}

#[test]
fn criterion_02_stable_hom_lemma_vs_oracle() {
    let r = report(2, &full_bounds());
    assert!(r.passed, "{}", r.details);
    assert!(
        r.millis < 60_000,
        "runtime budget 60 s exceeded: {} ms",
        r.millis
    );
}

#[test]
fn criterion_03_cy2_symmetry() {
    let r = report(3, &full_bounds());
    assert!(r.passed, "{}", r.details);
}

#[test]
fn criterion_04_catalan_counts() {
    let r = report(4, &full_bounds());
    assert!(r.passed, "{}", r.details);
    assert!(
        r.millis < 60_000,
        "runtime budget 60 s exceeded: {} ms",
        r.millis
    );
}

#[test]
fn criterion_05_mutation_axioms() {
    let r = report(5, &full_bounds());
    assert!(r.passed, "{}", r.details);
}

#[test]
fn criterion_06_krull_schmidt_trials() {
    let r = report(6, &full_bounds());
    assert!(r.passed, "{}", r.details);
}

#[test]
fn criterion_07_fuss_catalan_bijection() {
    let r = report(7, &full_bounds());
    assert!(r.passed, "{}", r.details);
    assert!(
        r.millis < 120_000,
        "runtime budget 120 s exceeded: {} ms",
        r.millis
    );
}

#[test]
fn criterion_08_cy_m_symmetry() {
    let r = report(8, &full_bounds());
    assert!(r.passed, "{}", r.details);
}

#[test]
fn criterion_09_m5_configuration() {
    let r = report(9, &full_bounds());
    assert!(r.passed, "{}", r.details);
}

#[test]
fn criterion_10_ar_structure() {
    let r = report(10, &full_bounds());
    assert!(r.passed, "{}", r.details);
}

#[test]
fn fault_injection_self_test() {
    // the harness must catch a deliberately corrupted cluster
    let bounds = VerifyBounds {
        max_n: 6,
        fault: InjectFault::Crossing,
        ..VerifyBounds::default()
    };
    let r = run_criterion(5, &bounds);
    assert!(!r.passed, "injected crossing went undetected");
}
