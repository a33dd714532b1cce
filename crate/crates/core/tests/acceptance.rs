//! One test per acceptance criterion; each prints a pass/fail line.

use thickres::selftest::{run_criterion, DEFAULT_SEED};
use thickres::principalize::DEFAULT_FUEL;

fn check(id: u32) {
    let r = run_criterion(id, DEFAULT_SEED, DEFAULT_FUEL);
    println!("{r}");
    assert!(r.passed, "{r}");
}

#[test]
fn criterion_01_log_blowup_golden() {
    check(1);
}

#[test]
fn criterion_02_reduction_commutes_with_blowup() {
    check(2);
}

#[test]
fn criterion_03_transform_compatibility() {
    check(3);
}

#[test]
fn criterion_04_monomialization() {
    check(4);
}

#[test]
fn criterion_05_principalization_postcondition() {
    check(5);
}

#[test]
fn criterion_06_factorization_roundtrip() {
    check(6);
}

#[test]
fn criterion_07_retract_invariant() {
    check(7);
}

#[test]
fn criterion_08_resolution_over_b() {
    check(8);
}

#[test]
fn criterion_09_log_smooth_embedding() {
    check(9);
}

#[test]
fn criterion_10_functoriality() {
    check(10);
}

#[test]
fn other_seeds_pass_too() {
    for seed in [1, 2, 3] {
        for id in [2, 3, 5, 6, 7] {
            let r = run_criterion(id, seed, DEFAULT_FUEL);
            assert!(r.passed, "seed {seed}: {r}");
        }
    }
}
