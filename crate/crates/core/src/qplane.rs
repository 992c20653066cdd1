//! The quantum-plane Laurent algebra generated by `x`, `p` and their inverses,
//! subject to `p x = q x p`.
//!
//! Every [`QElement`] is a finite sum `sum a_ij(q) x^i p^j` kept in canonical
//! x-before-p order; there is no way to observe an un-normalized word.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::qfield::QScalar;

/// The canonical word `x^i p^j`. Ordered lexicographically by `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub i: i64,
    pub j: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { i: 0, j: 0 };

    pub fn new(i: i64, j: i64) -> Self {
        Monomial { i, j }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.i, self.j) {
            (0, 0) => f.write_str("1"),
            (i, 0) => write!(f, "x^{i}"),
            (0, j) => write!(f, "p^{j}"),
            (i, j) => write!(f, "x^{i}*p^{j}"),
        }
    }
}

/// Power of `q` picked up when `p^j1` is commuted past `x^i2`:
/// `p^j1 x^i2 = q^(j1 i2) x^i2 p^j1`.
pub fn normal_order_swap_count(j1: i64, i2: i64) -> i64 {
    j1 * i2
}

/// A finite Laurent polynomial in the quantum plane with coefficients in `Q(q)`.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub struct QElement {
    terms: BTreeMap<Monomial, QScalar>,
}

impl QElement {
    pub fn zero() -> Self {
        QElement::default()
    }

    pub fn one() -> Self {
        Self::constant(QScalar::one())
    }

    pub fn constant(c: QScalar) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(1, 0)
    }

    pub fn p() -> Self {
        Self::monomial(0, 1)
    }

    /// `x^i p^j` with coefficient one.
    pub fn monomial(i: i64, j: i64) -> Self {
        Self::term(QScalar::one(), i, j)
    }

    /// `c x^i p^j`.
    pub fn term(c: QScalar, i: i64, j: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(i, j), c);
        }
        QElement { terms }
    }

    /// Sums the given terms, merging repeated monomials.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, QScalar)>>(terms: I) -> Self {
        let mut out = QElement::zero();
        for (m, c) in terms {
            out.add_term(m, &c);
        }
        out
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing = &*existing + c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &QScalar)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Monomial) -> QScalar {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    /// The single term of a one-term element.
    pub fn as_single_term(&self) -> Option<(Monomial, &QScalar)> {
        if self.terms.len() != 1 {
            return None;
        }
        self.terms.iter().next().map(|(m, c)| (*m, c))
    }

    /// `Some(c)` if the element is a scalar multiple of `1` (zero included).
    pub fn as_constant(&self) -> Option<QScalar> {
        match self.terms.len() {
            0 => Some(QScalar::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    /// True when every exponent is nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.i >= 0 && m.j >= 0)
    }

    pub fn scalar_mul(&self, c: &QScalar) -> QElement {
        if c.is_zero() {
            return QElement::zero();
        }
        QElement {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    /// Canonical product using `(x^i1 p^j1)(x^i2 p^j2) = q^(j1 i2) x^(i1+i2) p^(j1+j2)`.
    pub fn product(&self, other: &QElement) -> QElement {
        let mut out = QElement::zero();
        for (m1, a) in &self.terms {
            for (m2, b) in &other.terms {
                let twist = QScalar::q_power(normal_order_swap_count(m1.j, m2.i));
                let c = &(a * b) * &twist;
                out.add_term(Monomial::new(m1.i + m2.i, m1.j + m2.j), &c);
            }
        }
        out
    }

    /// `[f, g] = f g - g f`.
    pub fn commutator(&self, other: &QElement) -> QElement {
        &self.product(other) - &other.product(self)
    }

    /// Two-sided inverse of a nonzero monomial `c x^i p^j`, namely `c^-1 q^(ij) x^-i p^-j`.
    pub fn invert(&self) -> Result<QElement> {
        let (m, c) = self.as_single_term().ok_or(QError::NonInvertible {
            terms: self.num_terms(),
        })?;
        let c = c.inv()? * QScalar::q_power(m.i * m.j);
        Ok(QElement::term(c, -m.i, -m.j))
    }

    /// Integer power; negative exponents require an invertible monomial.
    pub fn pow(&self, k: i64) -> Result<QElement> {
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut acc = QElement::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.product(&base);
        }
        Ok(acc)
    }

    /// `f(q^k x, q^l p)`: each term picks up `q^(k i + l j)`.
    pub fn scale_substitute(&self, k: i64, l: i64) -> QElement {
        QElement {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a * &QScalar::q_power(k * m.i + l * m.j)))
                .collect(),
        }
    }

    /// Coefficient-wise map; zero results are dropped.
    pub fn try_map_coeffs<F>(&self, mut f: F) -> Result<QElement>
    where
        F: FnMut(&Monomial, &QScalar) -> Result<QScalar>,
    {
        let mut out = QElement::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, &f(m, c)?);
        }
        Ok(out)
    }

    /// Specializes every coefficient at `q = q0`.
    pub fn eval_at(&self, q0: &BigRational) -> Result<QElement> {
        self.try_map_coeffs(|_, c| Ok(QScalar::from_rational(&c.eval_at(q0)?)))
    }

    /// Coefficient-wise `q -> 1` limit into the commutative Laurent ring `Q[t1^±, t2^±]`.
    pub fn classical_limit(&self) -> Result<ClassicalPoly> {
        let mut out = ClassicalPoly::default();
        for (m, c) in &self.terms {
            let v = c
                .limit_at_one()
                .map_err(|_| QError::PoleAtOne { monomial: Some(*m) })?;
            out.add_term(*m, v);
        }
        Ok(out)
    }
}

impl fmt::Debug for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QElement({self})")
    }
}

impl fmt::Display for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::shell::print::element_text(self))
    }
}

impl From<QScalar> for QElement {
    fn from(c: QScalar) -> Self {
        QElement::constant(c)
    }
}

impl Add for &QElement {
    type Output = QElement;
    fn add(self, rhs: &QElement) -> QElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl Neg for &QElement {
    type Output = QElement;
    fn neg(self) -> QElement {
        QElement {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Sub for &QElement {
    type Output = QElement;
    fn sub(self, rhs: &QElement) -> QElement {
        self + &(-rhs)
    }
}

impl Mul for &QElement {
    type Output = QElement;
    fn mul(self, rhs: &QElement) -> QElement {
        self.product(rhs)
    }
}

impl Add for QElement {
    type Output = QElement;
    fn add(self, rhs: QElement) -> QElement {
        &self + &rhs
    }
}

impl Sub for QElement {
    type Output = QElement;
    fn sub(self, rhs: QElement) -> QElement {
        &self - &rhs
    }
}

impl Mul for QElement {
    type Output = QElement;
    fn mul(self, rhs: QElement) -> QElement {
        self.product(&rhs)
    }
}

impl Neg for QElement {
    type Output = QElement;
    fn neg(self) -> QElement {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    i: i64,
    j: i64,
    coeff: QScalar,
}

/// JSON shape: `{"terms": [{"i": .., "j": .., "coeff": <scalar>}, ...]}` sorted by `(i, j)`.
#[derive(Serialize, Deserialize)]
struct ElementRepr {
    terms: Vec<TermRepr>,
}

impl From<QElement> for ElementRepr {
    fn from(e: QElement) -> Self {
        ElementRepr {
            terms: e
                .terms
                .into_iter()
                .map(|(m, coeff)| TermRepr {
                    i: m.i,
                    j: m.j,
                    coeff,
                })
                .collect(),
        }
    }
}

impl From<ElementRepr> for QElement {
    fn from(r: ElementRepr) -> Self {
        QElement::from_terms(
            r.terms
                .into_iter()
                .map(|t| (Monomial::new(t.i, t.j), t.coeff)),
        )
    }
}

/// Commutative Laurent polynomial in `t1, t2` with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassicalPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl ClassicalPoly {
    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn term(c: BigRational, i: i64, j: i64) -> Self {
        let mut out = ClassicalPoly::default();
        out.add_term(Monomial::new(i, j), c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Monomial) -> BigRational {
        self.terms
            .get(&m)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Commutative product.
    pub fn mul(&self, other: &ClassicalPoly) -> ClassicalPoly {
        let mut out = ClassicalPoly::default();
        for (m1, a) in &self.terms {
            for (m2, b) in &other.terms {
                out.add_term(Monomial::new(m1.i + m2.i, m1.j + m2.j), a * b);
            }
        }
        out
    }
}

impl fmt::Display for ClassicalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &BigRational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors = Vec::new();
            if !mag.is_one() || *m == Monomial::ONE {
                factors.push(if mag.is_integer() {
                    mag.to_string()
                } else {
                    format!("({mag})")
                });
            }
            for (name, e) in [("t1", m.i), ("t2", m.j)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            f.write_str(&factors.join(" * "))?;
        }
        Ok(())
    }
}
