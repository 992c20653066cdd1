#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use quantum_plane::{IntPoly, Monomial, QElement, QScalar};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn small_poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-4i64..=4, 0..=max_deg + 1).prop_map(IntPoly::from_dense)
}

pub fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    small_poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

/// Small rational functions `n(q) / d(q)`.
pub fn scalar() -> impl Strategy<Value = QScalar> {
    (small_poly(2), nonzero_poly(2)).prop_map(|(n, d)| QScalar::from_parts(n, d).unwrap())
}

pub fn nonzero_scalar() -> impl Strategy<Value = QScalar> {
    scalar().prop_filter("nonzero", |c| !c.is_zero())
}

/// Coefficients that keep element arithmetic cheap: `a q^k` or `a + b q`.
pub fn light_scalar() -> impl Strategy<Value = QScalar> {
    prop_oneof![
        ((-3i64..=3).prop_filter("nonzero", |a| *a != 0), -2i64..=2)
            .prop_map(|(a, k)| QScalar::from_int(a) * QScalar::q_power(k)),
        (-2i64..=2, -2i64..=2).prop_map(|(a, b)| QScalar::from_poly_coeffs(&[a, b])),
        (1i64..=3, 1i64..=3).prop_map(|(n, d)| QScalar::from_rational(&rat(n, d))),
    ]
}

pub fn monomial(lo: i64, hi: i64) -> impl Strategy<Value = Monomial> {
    (lo..=hi, lo..=hi).prop_map(|(i, j)| Monomial::new(i, j))
}

pub fn element(max_terms: usize, lo: i64, hi: i64) -> impl Strategy<Value = QElement> {
    prop::collection::vec((monomial(lo, hi), light_scalar()), 0..=max_terms)
        .prop_map(QElement::from_terms)
}

pub fn polynomial(max_terms: usize, max_exp: i64) -> impl Strategy<Value = QElement> {
    element(max_terms, 0, max_exp)
}
