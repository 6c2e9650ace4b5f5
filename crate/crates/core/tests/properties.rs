//! Randomised soundness checks of the enveloping-algebra engine and the
//! pyramid combinatorics.

mod support;
use support::props;

#[test]
fn engine_is_associative() {
    props::associativity(500, 6).unwrap();
}

#[test]
fn engine_satisfies_jacobi() {
    props::jacobi(500, 6).unwrap();
}

#[test]
fn straightening_matches_naive_rewriting() {
    props::straightening(500, 6).unwrap();
}

#[test]
fn chi_projection_is_idempotent() {
    props::projection(500, 6).unwrap();
}

#[test]
fn pyramid_round_trips() {
    props::pyramid_roundtrip(200, 12).unwrap();
}

#[test]
fn naive_oracle_sanity() {
    let alg = yw_core::Algebra::gl(2);
    // e_21 e_12 = e_12 e_21 − e_11 + e_22
    let w = [alg.gen(2, 1), alg.gen(1, 2)];
    let want = alg.mul(&alg.e(1, 2), &alg.e(2, 1)).sub(&alg.e(1, 1)).add(&alg.e(2, 2));
    assert_eq!(props::naive_straighten(&alg, &w), want);
}
