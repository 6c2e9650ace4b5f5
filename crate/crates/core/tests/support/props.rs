//! Randomised property suites shared by the core property tests and the
//! acceptance target. Each suite runs a fixed number of cases from a fixed
//! seed and returns the first counterexample as a message.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use std::collections::BTreeMap;
use yw_core::{Algebra, Element, Gen, Mono, Pyramid, Rational};

fn runner(cases: u32, seed: u8) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn report(r: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// Unimodal column heights with at most `max_n` bricks.
pub fn pyramid_heights(max_n: usize) -> impl Strategy<Value = Vec<usize>> {
    (prop::collection::vec(1..=max_n.min(6), 1..=max_n.min(7)), any::<prop::sample::Index>()).prop_map(
        move |(mut h, peak)| {
            let mut total = 0;
            h.retain(|&x| {
                total += x;
                total <= max_n
            });
            if h.is_empty() {
                h.push(1);
            }
            h.sort_unstable();
            let k = peak.index(h.len());
            let mut right: Vec<usize> = h.split_off(k);
            right.reverse();
            h.extend(right);
            // h is now ascending then descending
            h
        },
    )
}

/// Random element: up to four terms, each a word of up to three generators
/// with a small integer coefficient, straightened in `alg`.
fn element(alg: &Algebra, seeds: &[(i64, Vec<usize>)]) -> Element {
    let g = alg.num_gens();
    let mut out = Element::zero();
    for (c, w) in seeds {
        let word: Vec<Gen> = w.iter().map(|&x| (x % g) as Gen).collect();
        out.add_scaled(&alg.word(&word), &Rational::int(*c));
    }
    out
}

fn element_seeds() -> impl Strategy<Value = Vec<(i64, Vec<usize>)>> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(0usize..256, 0..=3)), 1..=4)
}

/// Straightening by adjacent transpositions on plain words, independent of
/// the engine's multiplication: `e_a e_b = e_b e_a + [e_a, e_b]` whenever
/// `e_a` comes after `e_b` in the generator order.
pub fn naive_straighten(alg: &Algebra, w: &[Gen]) -> Element {
    let n = alg.big_n();
    let rank = |i: usize, j: usize| alg.gen(i, j);
    let mut todo: BTreeMap<Vec<(usize, usize)>, i64> = BTreeMap::new();
    todo.insert(w.iter().map(|&g| alg.pair(g)).collect(), 1);
    let mut done: BTreeMap<Vec<(usize, usize)>, i64> = BTreeMap::new();
    while let Some((word, c)) = todo.pop_first() {
        if c == 0 {
            continue;
        }
        let pos = (1..word.len()).find(|&t| rank(word[t - 1].0, word[t - 1].1) > rank(word[t].0, word[t].1));
        let Some(t) = pos else {
            *done.entry(word).or_insert(0) += c;
            continue;
        };
        let ((i, j), (h, k)) = (word[t - 1], word[t]);
        let mut swapped = word.clone();
        swapped.swap(t - 1, t);
        *todo.entry(swapped).or_insert(0) += c;
        for (a, b, s) in [(i, k, if j == h { 1 } else { 0 }), (h, j, if k == i { -1 } else { 0 })] {
            if s != 0 && a >= 1 && b <= n {
                let mut v = word[..t - 1].to_vec();
                v.push((a, b));
                v.extend_from_slice(&word[t + 1..]);
                *todo.entry(v).or_insert(0) += s * c;
            }
        }
    }
    let mut out = Element::zero();
    for (word, c) in done {
        if c != 0 {
            let m: Mono = word.iter().map(|&(i, j)| rank(i, j)).collect();
            out.add_term(m, Rational::int(c));
        }
    }
    out
}

fn algebra_for(q: &[usize]) -> Algebra {
    Algebra::for_pyramid(&Pyramid::from_heights(q).expect("strategy yields pyramids"))
}

/// `(ab)c = a(bc)`.
pub fn associativity(cases: u32, max_n: usize) -> Result<(), String> {
    let strat = (pyramid_heights(max_n), element_seeds(), element_seeds(), element_seeds());
    report(runner(cases, 1).run(&strat, |(q, a, b, c)| {
        let alg = algebra_for(&q);
        let (a, b, c) = (element(&alg, &a), element(&alg, &b), element(&alg, &c));
        let lhs = alg.mul(&alg.mul(&a, &b), &c);
        let rhs = alg.mul(&a, &alg.mul(&b, &c));
        prop_assert_eq!(lhs, rhs, "q = {:?}", q);
        Ok(())
    }))
}

/// `[a,[b,c]] + [b,[c,a]] + [c,[a,b]] = 0`.
pub fn jacobi(cases: u32, max_n: usize) -> Result<(), String> {
    let strat = (pyramid_heights(max_n), element_seeds(), element_seeds(), element_seeds());
    report(runner(cases, 2).run(&strat, |(q, a, b, c)| {
        let alg = algebra_for(&q);
        let (a, b, c) = (element(&alg, &a), element(&alg, &b), element(&alg, &c));
        let s = alg
            .bracket(&a, &alg.bracket(&b, &c))
            .add(&alg.bracket(&b, &alg.bracket(&c, &a)))
            .add(&alg.bracket(&c, &alg.bracket(&a, &b)));
        prop_assert!(s.is_zero(), "q = {:?}: {:?}", q, s);
        Ok(())
    }))
}

/// The engine's normal form of a word equals the naive rewriting result.
pub fn straightening(cases: u32, max_n: usize) -> Result<(), String> {
    let strat = (pyramid_heights(max_n), prop::collection::vec(0usize..256, 0..=6));
    report(runner(cases, 3).run(&strat, |(q, w)| {
        let alg = algebra_for(&q);
        let w: Vec<Gen> = w.iter().map(|&x| (x % alg.num_gens()) as Gen).collect();
        prop_assert_eq!(alg.word(&w), naive_straighten(&alg, &w), "q = {:?}, word = {:?}", q, w);
        Ok(())
    }))
}

/// `pr_χ` lands in `U(p)` and is idempotent.
pub fn projection(cases: u32, max_n: usize) -> Result<(), String> {
    let strat = (pyramid_heights(max_n), element_seeds());
    report(runner(cases, 4).run(&strat, |(q, a)| {
        let alg = algebra_for(&q);
        let x = element(&alg, &a);
        let p = alg.project_chi(&x);
        prop_assert!(alg.is_parabolic(&p));
        prop_assert_eq!(alg.project_chi(&p), p);
        Ok(())
    }))
}

/// Pyramid ↔ shift matrix round trips: the shift matrix satisfies
/// additivity, its row lengths are the pyramid's, and it rebuilds the
/// pyramid at the same level; the centralizer index set has `Σ_i (2i−1)p_i`
/// elements, `λ` being the row lengths sorted decreasingly (the dimension of
/// the centralizer of a nilpotent of Jordan type `λ`).
pub fn pyramid_roundtrip(cases: u32, max_n: usize) -> Result<(), String> {
    report(runner(cases, 5).run(&pyramid_heights(max_n), |q| {
        let pyr = Pyramid::from_heights(&q).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let sigma = pyr.shift_matrix().map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(sigma.additivity_violation(), None);
        let p = sigma.row_lengths(pyr.l()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(p.as_slice(), pyr.p());
        let back = sigma.pyramid_of(pyr.l()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(back.q(), pyr.q());
        prop_assert_eq!(pyr.p().iter().sum::<usize>(), pyr.big_n());
        let mut lambda = p.clone();
        lambda.sort_unstable_by(|a, b| b.cmp(a));
        let dim: usize = lambda.iter().enumerate().map(|(i, &pi)| (2 * i + 1) * pi).sum();
        prop_assert_eq!(sigma.centralizer_index_set(&p).len(), dim);
        for b in 1..=pyr.big_n() {
            prop_assert_eq!(pyr.brick_at(pyr.row(b), pyr.col(b)), Some(b));
        }
        Ok(())
    }))
}
