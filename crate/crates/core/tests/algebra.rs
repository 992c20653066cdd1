mod common;

use common::{element, light_scalar, monomial, polynomial, rat};
use proptest::prelude::*;
use quantum_plane::qplane::normal_order_swap_count;
use quantum_plane::{QElement, QError, QScalar};

/// Independent oracle: lay out `p^j x^i` as single letters and bubble every
/// `p^s x^t` pair past each other, one adjacent swap at a time.
fn brute_force_px(j: i64, i: i64) -> (i64, usize) {
    #[derive(Clone, Copy, PartialEq)]
    enum L {
        X(i64),
        P(i64),
    }
    let mut word: Vec<L> = std::iter::repeat_n(L::P(j.signum()), j.unsigned_abs() as usize)
        .chain(std::iter::repeat_n(
            L::X(i.signum()),
            i.unsigned_abs() as usize,
        ))
        .collect();
    let (mut q_exp, mut swaps) = (0, 0);
    while let Some(k) = word
        .windows(2)
        .position(|w| matches!((w[0], w[1]), (L::P(_), L::X(_))))
    {
        let (L::P(s), L::X(t)) = (word[k], word[k + 1]) else {
            unreachable!()
        };
        q_exp += s * t;
        swaps += 1;
        word.swap(k, k + 1);
    }
    (q_exp, swaps)
}

#[test]
fn normal_ordering_matches_single_swaps() {
    for i in -4..=4 {
        for j in -4..=4 {
            let lhs = QElement::monomial(0, j).product(&QElement::monomial(i, 0));
            let (q_exp, swaps) = brute_force_px(j, i);
            assert_eq!(swaps as i64, (i * j).abs());
            assert_eq!(q_exp, i * j);
            assert_eq!(normal_order_swap_count(j, i), i * j);
            assert_eq!(
                lhs,
                QElement::term(QScalar::q_power(q_exp), i, j),
                "p^{j} x^{i}"
            );
        }
    }
}

#[test]
fn commutator_of_generators() {
    let xp = QElement::monomial(1, 1);
    let expected = xp.scalar_mul(&(QScalar::one() - QScalar::q()));
    assert_eq!(QElement::x().commutator(&QElement::p()), expected);
}

#[test]
fn monomial_inverses() {
    let coeffs = [QScalar::one(), QScalar::q(), QScalar::one() - QScalar::q()];
    for i in -3..=3 {
        for j in -3..=3 {
            for c in &coeffs {
                let m = QElement::term(c.clone(), i, j);
                let inv = m.invert().unwrap();
                assert_eq!(m.product(&inv), QElement::one());
                assert_eq!(inv.product(&m), QElement::one());
            }
        }
    }
}

#[test]
fn non_monomials_are_not_invertible() {
    let f = &QElement::x() + &QElement::p();
    assert!(matches!(
        f.invert(),
        Err(QError::NonInvertible { terms: 2 })
    ));
    assert!(matches!(
        QElement::zero().invert(),
        Err(QError::NonInvertible { terms: 0 })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn associativity(f in element(4, -3, 3), g in element(4, -3, 3), h in element(4, -3, 3)) {
        prop_assert_eq!(f.product(&g).product(&h), f.product(&g.product(&h)));
    }

    #[test]
    fn distributivity_and_unit(f in element(4, -3, 3), g in element(4, -3, 3), h in element(4, -3, 3)) {
        prop_assert_eq!(f.product(&(&g + &h)), &f.product(&g) + &f.product(&h));
        prop_assert_eq!((&f + &g).product(&h), &f.product(&h) + &g.product(&h));
        prop_assert_eq!(f.product(&QElement::one()), f.clone());
        prop_assert_eq!(QElement::one().product(&f), f);
    }

    #[test]
    fn bracket_leibniz(f in element(4, -3, 3), g in element(4, -3, 3), h in element(4, -3, 3)) {
        let lhs = f.product(&g).commutator(&h);
        let rhs = &f.product(&g.commutator(&h)) + &f.commutator(&h).product(&g);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn classical_limit_is_multiplicative(f in element(3, -3, 3), g in element(3, -3, 3)) {
        let fl = f.classical_limit().unwrap();
        let gl = g.classical_limit().unwrap();
        prop_assert_eq!(f.product(&g).classical_limit().unwrap(), fl.mul(&gl));
    }

    #[test]
    fn powers_agree_with_repeated_products(c in light_scalar().prop_filter("nonzero", |c| !c.is_zero()), m in monomial(-2, 2), k in -3i64..=3) {
        let e = QElement::term(c, m.i, m.j);
        let mut expected = QElement::one();
        let step = if k >= 0 { e.clone() } else { e.invert().unwrap() };
        for _ in 0..k.abs() {
            expected = expected.product(&step);
        }
        prop_assert_eq!(e.pow(k).unwrap(), expected);
    }

    #[test]
    fn shifted_substitution_is_an_automorphism(f in polynomial(3, 3), g in polynomial(3, 3), k in -2i64..=2, l in -2i64..=2) {
        // x -> q^k x, p -> q^l p respects p x = q x p.
        let s = |e: &QElement| e.scale_substitute(k, l);
        prop_assert_eq!(s(&f.product(&g)), s(&f).product(&s(&g)));
        prop_assert_eq!(s(&s(&f)).scale_substitute(-2 * k, -2 * l), f);
    }

    #[test]
    fn json_round_trip(f in element(5, -4, 4)) {
        let s = serde_json::to_string(&f).unwrap();
        let back: QElement = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn specialization_is_multiplicative(f in element(3, -2, 2), g in element(3, -2, 2), n in 1i64..9) {
        let q0 = rat(n, 10);
        if let (Ok(a), Ok(b)) = (f.eval_at(&q0), g.eval_at(&q0)) {
            prop_assert_eq!(f.product(&g).eval_at(&q0).unwrap(), a.product(&b).eval_at(&q0).unwrap());
        }
    }
}
