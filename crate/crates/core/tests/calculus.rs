mod common;

use common::polynomial;
use proptest::prelude::*;
use quantum_plane::qcalculus::{
    apply_operator, compare_3_14, d_p, d_x, mixed_commutator, rewrite_to_normal_form, Letter,
    OpElement, OpExpr, OpWord,
};
use quantum_plane::{CalculusConfig, QElement, QError, QScalar};

fn cfg(m: i64) -> CalculusConfig {
    CalculusConfig {
        mixed_term_exponent: m,
    }
}

#[test]
fn closed_forms_match_rewriting_engine() {
    for m in [0, 1, 2, 3] {
        let cfg = cfg(m);
        for i in 0..=4 {
            for j in 0..=4 {
                let f = QElement::monomial(i, j);
                assert_eq!(
                    apply_operator(&OpElement::dp(), &f, &cfg).unwrap(),
                    d_p(&f),
                    "dp x^{i} p^{j}, m = {m}"
                );
                assert_eq!(
                    apply_operator(&OpElement::dx(), &f, &cfg).unwrap(),
                    d_x(&f, &cfg),
                    "dx x^{i} p^{j}, m = {m}"
                );
            }
        }
    }
}

#[test]
fn dp_on_p_then_x_words() {
    let cfg = CalculusConfig::default();
    for n in 0..=4 {
        for m in 0..=4 {
            let word = OpExpr::letters(&[Letter::Dp, Letter::P(n), Letter::X(m)]);
            let engine = rewrite_to_normal_form(&word, &cfg)
                .unwrap()
                .derivative_free_part();
            let target = QElement::monomial(0, n - 1)
                .product(&QElement::monomial(m, 0))
                .scalar_mul(&QScalar::q_int(n));
            assert_eq!(engine, target, "n = {n}, m = {m}");
        }
    }
}

#[test]
fn derivative_generators_q_commute() {
    let cfg = CalculusConfig::default();
    let lhs = rewrite_to_normal_form(&OpExpr::letters(&[Letter::Dp, Letter::Dx]), &cfg).unwrap();
    assert_eq!(lhs, OpElement::term(QScalar::q(), OpWord::new(0, 0, 1, 1)));
}

#[test]
fn negative_powers_are_rejected_by_the_engine() {
    let err = apply_operator(
        &OpElement::dx(),
        &QElement::monomial(-1, 0),
        &CalculusConfig::default(),
    );
    assert!(matches!(err, Err(QError::UnsupportedNegativePower { .. })));
}

/// Every word of length at most 6 over x, p, ∂x, ∂p reaches a canonical form.
#[test]
fn rewriting_terminates_on_small_words() {
    let alphabet = [Letter::X(1), Letter::P(1), Letter::Dx, Letter::Dp];
    let cfg = CalculusConfig::default();
    let mut words: Vec<Vec<Letter>> = vec![vec![]];
    let mut checked = 0;
    for _ in 0..6 {
        words = words
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |l| {
                    let mut w = w.clone();
                    w.push(*l);
                    w
                })
            })
            .collect();
        for w in &words {
            let nf = rewrite_to_normal_form(&OpExpr::letters(w), &cfg).unwrap();
            let (k, l): (u32, u32) = w.iter().fold((0, 0), |(k, l), c| match c {
                Letter::Dx => (k + 1, l),
                Letter::Dp => (k, l + 1),
                _ => (k, l),
            });
            // `∂x x` may trade a `∂x` for a `∂p`, but never adds one.
            assert!(nf.terms().all(|(t, _)| t.k + t.l <= k + l));
            checked += 1;
        }
    }
    assert_eq!(checked, 4 + 16 + 64 + 256 + 1024 + 4096);
}

#[test]
fn q_derivatives_become_classical() {
    for n in 1..=4 {
        let c = d_p(&QElement::monomial(0, n)).coeff(quantum_plane::Monomial::new(0, n - 1));
        assert_eq!(c.limit_at_one().unwrap(), common::rat(n, 1));
    }
}

#[test]
fn comparison_ratio_pattern() {
    // (1 - q) [i][j] q^-i against q^(ij+j-1) q^((i-1)(j-1)) [i][j] (1 - q).
    let cfg = CalculusConfig::default();
    for i in 1..=4 {
        for j in 1..=4 {
            let report = compare_3_14(&QElement::monomial(i, j), &cfg);
            assert!(report.supports_match());
            assert_eq!(report.rows.len(), 1);
            assert_eq!(
                report.rows[0].ratio_q_exponent(),
                Some(2 * j - 2 - 2 * i * j)
            );
        }
    }
}

proptest! {
    #[test]
    fn derivatives_are_additive(f in polynomial(4, 4), g in polynomial(4, 4)) {
        let cfg = CalculusConfig::default();
        prop_assert_eq!(d_p(&(&f + &g)), &d_p(&f) + &d_p(&g));
        prop_assert_eq!(d_x(&(&f + &g), &cfg), &d_x(&f, &cfg) + &d_x(&g, &cfg));
    }

    #[test]
    fn commutator_part_agrees_with_engine(f in polynomial(3, 4)) {
        let cfg = CalculusConfig::default();
        let op = OpElement::term(QScalar::one() - QScalar::q(), OpWord::new(0, 0, 1, 1));
        prop_assert_eq!(apply_operator(&op, &f, &cfg).unwrap(), mixed_commutator(&f, &cfg));
    }
}
