//! q-deformed differential calculus on the quantum plane.
//!
//! Two independent routes compute derivatives:
//!
//! * a rewriting engine over words in the generators `x, p, ∂x, ∂p`, driven by the
//!   commutation rules
//!   - `∂x x -> 1 + q^2 x ∂x + (q^m - 1) p ∂p`
//!   - `∂x p -> q p ∂x`
//!   - `∂p x -> q^-1 x ∂p`
//!   - `∂p p -> 1 + q^2 p ∂p`
//!   - `p x  -> q x p`
//!   - `∂p ∂x -> q ∂x ∂p`
//!
//!   where `m` is [`CalculusConfig::mixed_term_exponent`];
//! * closed forms [`d_x`] and [`d_p`] acting term by term, which also cover negative powers.
//!
//! The rule set is not confluent when `m != 0` (the critical pair `∂x p x` resolves to
//! different normal forms), so the engine uses a fixed strategy: derivative/coordinate
//! redexes first, then coordinate swaps, then derivative swaps, each leftmost first. On an
//! operator applied to a canonical element the derivatives only ever meet canonical
//! coordinate suffixes, so [`apply_operator`] does not depend on that choice.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::qfield::QScalar;
use crate::qplane::{Monomial, QElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CalculusConfig {
    /// Exponent `m` of the mixed term `(q^m - 1) p ∂p` in the `∂x x` rule.
    pub mixed_term_exponent: i64,
}

impl Default for CalculusConfig {
    fn default() -> Self {
        CalculusConfig {
            mixed_term_exponent: 2,
        }
    }
}

/// One run in a raw operator word. Coordinate runs carry an integer power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X(i64),
    P(i64),
    Dx,
    Dp,
}

/// A word in the generators, not necessarily in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            match (out.last_mut(), l) {
                (_, Letter::X(0) | Letter::P(0)) => {}
                (Some(Letter::X(a)), Letter::X(b)) | (Some(Letter::P(a)), Letter::P(b)) => {
                    *a += b;
                    if *a == 0 {
                        out.pop();
                    }
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.0.iter().chain(other.0.iter()).copied())
    }
}

impl From<OpWord> for Word {
    fn from(w: OpWord) -> Self {
        Word::new(
            [Letter::X(w.i), Letter::P(w.j)]
                .into_iter()
                .chain(std::iter::repeat_n(Letter::Dx, w.k as usize))
                .chain(std::iter::repeat_n(Letter::Dp, w.l as usize)),
        )
    }
}

/// Canonical operator monomial `x^i p^j ∂x^k ∂p^l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpWord {
    pub i: i64,
    pub j: i64,
    pub k: u32,
    pub l: u32,
}

impl OpWord {
    pub fn new(i: i64, j: i64, k: u32, l: u32) -> Self {
        OpWord { i, j, k, l }
    }

    pub fn is_derivative_free(&self) -> bool {
        self.k == 0 && self.l == 0
    }
}

impl fmt::Display for OpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [
            ("x", self.i),
            ("p", self.j),
            ("dx", self.k as i64),
            ("dp", self.l as i64),
        ] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Sum of raw words with scalar coefficients; the input side of the rewriting engine.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpExpr {
    terms: BTreeMap<Word, QScalar>,
}

impl OpExpr {
    pub fn word(w: Word) -> Self {
        Self::term(QScalar::one(), w)
    }

    pub fn term(c: QScalar, w: Word) -> Self {
        let mut out = OpExpr::default();
        out.add_term(w, c);
        out
    }

    pub fn letters(letters: &[Letter]) -> Self {
        Self::word(Word::new(letters.iter().copied()))
    }

    fn add_term(&mut self, w: Word, c: QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                *existing = &*existing + &c;
                if existing.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add(&self, other: &OpExpr) -> OpExpr {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scalar_mul(&self, c: &QScalar) -> OpExpr {
        let mut out = OpExpr::default();
        for (w, a) in &self.terms {
            out.add_term(w.clone(), a * c);
        }
        out
    }

    /// Concatenation product, no reordering.
    pub fn concat(&self, other: &OpExpr) -> OpExpr {
        let mut out = OpExpr::default();
        for (w1, a) in &self.terms {
            for (w2, b) in &other.terms {
                out.add_term(w1.concat(w2), a * b);
            }
        }
        out
    }
}

impl From<&OpElement> for OpExpr {
    fn from(e: &OpElement) -> Self {
        let mut out = OpExpr::default();
        for (w, c) in &e.terms {
            out.add_term(Word::from(*w), c.clone());
        }
        out
    }
}

impl From<&QElement> for OpExpr {
    fn from(f: &QElement) -> Self {
        OpExpr::from(&OpElement::from(f))
    }
}

/// Element of the operator algebra, stored in canonical `x p ∂x ∂p` order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpElement {
    terms: BTreeMap<OpWord, QScalar>,
}

impl OpElement {
    pub fn term(c: QScalar, w: OpWord) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        OpElement { terms }
    }

    pub fn dx() -> Self {
        Self::term(QScalar::one(), OpWord::new(0, 0, 1, 0))
    }

    pub fn dp() -> Self {
        Self::term(QScalar::one(), OpWord::new(0, 0, 0, 1))
    }

    fn add_term(&mut self, w: OpWord, c: &QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                *existing = &*existing + c;
                if existing.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpWord, &QScalar)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, w: OpWord) -> QScalar {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn scalar_mul(&self, c: &QScalar) -> OpElement {
        let mut out = OpElement::default();
        for (w, a) in &self.terms {
            out.add_term(*w, &(a * c));
        }
        out
    }

    /// Canonical product `self · other`.
    pub fn compose(&self, other: &OpElement, cfg: &CalculusConfig) -> Result<OpElement> {
        rewrite_to_normal_form(&OpExpr::from(self).concat(&OpExpr::from(other)), cfg)
    }

    /// Derivative-free part as a quantum-plane element.
    pub fn derivative_free_part(&self) -> QElement {
        QElement::from_terms(
            self.terms
                .iter()
                .filter(|(w, _)| w.is_derivative_free())
                .map(|(w, c)| (Monomial::new(w.i, w.j), c.clone())),
        )
    }
}

impl From<&QElement> for OpElement {
    fn from(f: &QElement) -> Self {
        let mut out = OpElement::default();
        for (m, c) in f.terms() {
            out.add_term(OpWord::new(m.i, m.j, 0, 0), c);
        }
        out
    }
}

impl fmt::Display for OpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c}) * {w}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

enum Redex {
    DerivCoord(usize),
    CoordSwap(usize),
    DerivSwap(usize),
}

fn find_redex(w: &[Letter]) -> Option<Redex> {
    use Letter::*;
    let pairs = || w.windows(2).enumerate();
    pairs()
        .find(|(_, pr)| matches!(pr, [Dx | Dp, X(_) | P(_)]))
        .map(|(t, _)| Redex::DerivCoord(t))
        .or_else(|| {
            pairs()
                .find(|(_, pr)| matches!(pr, [P(_), X(_)]))
                .map(|(t, _)| Redex::CoordSwap(t))
        })
        .or_else(|| {
            pairs()
                .find(|(_, pr)| matches!(pr, [Dp, Dx]))
                .map(|(t, _)| Redex::DerivSwap(t))
        })
}

/// Replaces the pair at `t, t+1` with `middle`.
fn splice(w: &[Letter], t: usize, middle: &[Letter]) -> Word {
    Word::new(
        w[..t]
            .iter()
            .chain(middle.iter())
            .chain(w[t + 2..].iter())
            .copied(),
    )
}

/// One rewriting step on a word; `None` when the word is already canonical.
fn rewrite_step(w: &Word, cfg: &CalculusConfig) -> Result<Option<Vec<(Word, QScalar)>>> {
    use Letter::*;
    let l = w.letters();
    let Some(redex) = find_redex(l) else {
        return Ok(None);
    };
    let q = QScalar::q;
    let out = match redex {
        Redex::DerivCoord(t) => match (l[t], l[t + 1]) {
            (_, X(a)) if a < 0 => return Err(QError::UnsupportedNegativePower { generator: 'x' }),
            (_, P(b)) if b < 0 => return Err(QError::UnsupportedNegativePower { generator: 'p' }),
            (Dx, X(a)) => {
                let mixed = QScalar::q_power(cfg.mixed_term_exponent) - QScalar::one();
                vec![
                    (splice(l, t, &[X(a - 1)]), QScalar::one()),
                    (splice(l, t, &[X(1), Dx, X(a - 1)]), QScalar::q_power(2)),
                    (splice(l, t, &[P(1), Dp, X(a - 1)]), mixed),
                ]
            }
            (Dx, P(b)) => vec![(splice(l, t, &[P(b), Dx]), QScalar::q_power(b))],
            (Dp, X(a)) => vec![(splice(l, t, &[X(a), Dp]), QScalar::q_power(-a))],
            (Dp, P(b)) => vec![
                (splice(l, t, &[P(b - 1)]), QScalar::one()),
                (splice(l, t, &[P(1), Dp, P(b - 1)]), QScalar::q_power(2)),
            ],
            _ => unreachable!("redex shape checked by find_redex"),
        },
        Redex::CoordSwap(t) => match (l[t], l[t + 1]) {
            (P(b), X(a)) => vec![(splice(l, t, &[X(a), P(b)]), QScalar::q_power(a * b))],
            _ => unreachable!(),
        },
        Redex::DerivSwap(t) => vec![(splice(l, t, &[Dx, Dp]), q())],
    };
    Ok(Some(out))
}

fn canonical_word(w: &Word) -> OpWord {
    let mut out = OpWord::new(0, 0, 0, 0);
    for l in w.letters() {
        match *l {
            Letter::X(a) => out.i += a,
            Letter::P(b) => out.j += b,
            Letter::Dx => out.k += 1,
            Letter::Dp => out.l += 1,
        }
    }
    out
}

/// Rewrites every word to canonical `x^i p^j ∂x^k ∂p^l` order.
pub fn rewrite_to_normal_form(e: &OpExpr, cfg: &CalculusConfig) -> Result<OpElement> {
    let mut pending = e.clone();
    let mut done = OpElement::default();
    while let Some((w, c)) = pending.terms.pop_first() {
        match rewrite_step(&w, cfg)? {
            None => done.add_term(canonical_word(&w), &c),
            Some(next) => {
                for (w2, k) in next {
                    pending.add_term(w2, &c * &k);
                }
            }
        }
    }
    Ok(done)
}

/// Applies an operator to a function: normal-orders `e · f` and keeps the derivative-free
/// words, since derivatives standing on the far right annihilate the constant `1`.
pub fn apply_operator(e: &OpElement, f: &QElement, cfg: &CalculusConfig) -> Result<QElement> {
    let expr = OpExpr::from(e).concat(&OpExpr::from(f));
    Ok(rewrite_to_normal_form(&expr, cfg)?.derivative_free_part())
}

/// Closed-form `∂p`: `x^i p^j -> q^-i [j] x^i p^(j-1)` with `[n] = (1 - q^2n)/(1 - q^2)`.
pub fn d_p(f: &QElement) -> QElement {
    QElement::from_terms(f.terms().map(|(m, c)| {
        let k = &QScalar::q_power(-m.i) * &QScalar::q_int(m.j);
        (Monomial::new(m.i, m.j - 1), c * &k)
    }))
}

/// Coefficient of `x^(i-1) p^j` in `∂x (x^i p^j)`: `[i] (1 + (q^m - 1)[j])`.
///
/// For the default `m = 2` this collapses to `q^(2j) [i]`.
pub fn d_x_coefficient(i: i64, j: i64, cfg: &CalculusConfig) -> QScalar {
    let mixed = QScalar::q_power(cfg.mixed_term_exponent) - QScalar::one();
    QScalar::q_int(i) * (QScalar::one() + mixed * QScalar::q_int(j))
}

/// Closed-form `∂x`, term by term.
pub fn d_x(f: &QElement, cfg: &CalculusConfig) -> QElement {
    QElement::from_terms(f.terms().map(|(m, c)| {
        (
            Monomial::new(m.i - 1, m.j),
            c * &d_x_coefficient(m.i, m.j, cfg),
        )
    }))
}

/// `[∂x, ∂p] f = (1 - q) ∂x ∂p f`.
pub fn mixed_commutator(f: &QElement, cfg: &CalculusConfig) -> QElement {
    let one_minus_q = QScalar::one() - QScalar::q();
    d_x(&d_p(f), cfg).scalar_mul(&one_minus_q)
}

/// The closed form printed for the commutator part:
/// `1/((1+q)^2 (1-q)) sum q^(ij+j-1) (1-q^2j)(1-q^2i) a_ij p^(j-1) x^(i-1)`,
/// with the trailing `p^(j-1) x^(i-1)` brought to canonical order.
pub fn paper_formula_3_14(f: &QElement) -> QElement {
    let one = QScalar::one();
    let prefactor = {
        let one_plus_q = &one + &QScalar::q();
        let den = &(&one_plus_q * &one_plus_q) * &(&one - &QScalar::q());
        den.inv()
            .expect("(1+q)^2 (1-q) is a nonzero rational function")
    };
    QElement::from_terms(f.terms().map(|(m, a)| {
        let (i, j) = (m.i, m.j);
        let c = QScalar::q_power(i * j + j - 1)
            * (&one - &QScalar::q_power(2 * j))
            * (&one - &QScalar::q_power(2 * i))
            * QScalar::q_power((j - 1) * (i - 1))
            * &prefactor
            * a;
        (Monomial::new(i - 1, j - 1), c)
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub monomial: Monomial,
    pub engine: QScalar,
    pub paper: QScalar,
    /// `engine / paper`; `None` when the printed formula has no term here.
    pub ratio: Option<QScalar>,
}

impl ComparisonRow {
    /// `Some(e)` when the ratio is exactly `q^e`.
    pub fn ratio_q_exponent(&self) -> Option<i64> {
        self.ratio.as_ref()?.as_q_power()
    }
}

/// Term-by-term comparison of `(1 - q) ∂x ∂p f` with the printed closed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub config: CalculusConfig,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn supports_match(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.engine.is_zero() == r.paper.is_zero())
    }

    /// True when every row's ratio is a bare power of `q` (unit coefficient).
    pub fn ratios_are_q_powers(&self) -> bool {
        self.rows.iter().all(|r| r.ratio_q_exponent().is_some())
    }

    pub fn to_table(&self) -> String {
        let header = ["monomial", "engine", "paper", "ratio"];
        let rows: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.monomial.to_string(),
                    r.engine.to_string(),
                    r.paper.to_string(),
                    r.ratio
                        .as_ref()
                        .map_or_else(|| "-".to_string(), |c| c.to_string()),
                ]
            })
            .collect();
        let mut out = format!(
            "# compare314 mixed_term_exponent={} supports_match={}\n",
            self.config.mixed_term_exponent,
            self.supports_match()
        );
        out.push_str(&crate::shell::print::aligned_table(&header, &rows));
        out
    }
}

pub fn compare_3_14(f: &QElement, cfg: &CalculusConfig) -> ComparisonReport {
    let engine = mixed_commutator(f, cfg);
    let paper = paper_formula_3_14(f);
    let support: std::collections::BTreeSet<Monomial> = engine
        .terms()
        .chain(paper.terms())
        .map(|(m, _)| *m)
        .collect();
    let rows = support
        .into_iter()
        .map(|m| {
            let e = engine.coeff(m);
            let p = paper.coeff(m);
            let ratio = e.div(&p).ok();
            ComparisonRow {
                monomial: m,
                engine: e,
                paper: p,
                ratio,
            }
        })
        .collect();
    ComparisonReport { config: *cfg, rows }
}
