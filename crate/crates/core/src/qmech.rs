//! Time derivative and covariant derivatives generated by a fixed Hamiltonian.
//!
//! All covariant derivatives are partial: `[b, H]` has to be a nonzero monomial to be
//! inverted. For a monomial `H = x^a p^b` this means `[x, H] = (1 - q^b) x^(a+1) p^b`
//! needs `b != 0`, `[p, H] = (q^a - 1) x^a p^(b+1)` needs `a != 0`, and
//! `[x p, H] = (q^a - q^b) x^(a+1) p^(b+1)` needs `a != b`.

use serde::{Deserialize, Serialize};

use crate::error::{CovBase, QError, Result};
use crate::qfield::QScalar;
use crate::qplane::QElement;

/// A time-independent generator of the dynamics, `df/dt = [f, H]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hamiltonian(pub QElement);

impl Hamiltonian {
    pub fn new(h: QElement) -> Self {
        Hamiltonian(h)
    }

    pub fn element(&self) -> &QElement {
        &self.0
    }
}

impl From<QElement> for Hamiltonian {
    fn from(h: QElement) -> Self {
        Hamiltonian(h)
    }
}

pub fn time_derivative(f: &QElement, h: &Hamiltonian) -> QElement {
    f.commutator(&h.0)
}

fn base_element(base: CovBase) -> QElement {
    match base {
        CovBase::X | CovBase::ScaledX => QElement::x(),
        CovBase::P => QElement::p(),
        CovBase::XP => QElement::monomial(1, 1),
    }
}

fn inverse_bracket(base_elem: &QElement, base: CovBase, h: &Hamiltonian) -> Result<QElement> {
    let bracket = base_elem.commutator(&h.0);
    bracket
        .invert()
        .map_err(|_| QError::NonInvertibleCommutator {
            base,
            terms: bracket.num_terms(),
        })
}

/// `[f, H] · [b, H]^-1` with the inverse on the right.
fn covariant(f: &QElement, base: CovBase, h: &Hamiltonian) -> Result<QElement> {
    let inv = inverse_bracket(&base_element(base), base, h)?;
    Ok(time_derivative(f, h).product(&inv))
}

pub fn cov_x(f: &QElement, h: &Hamiltonian) -> Result<QElement> {
    covariant(f, CovBase::X, h)
}

pub fn cov_p(f: &QElement, h: &Hamiltonian) -> Result<QElement> {
    covariant(f, CovBase::P, h)
}

pub fn cov_xp(f: &QElement, h: &Hamiltonian) -> Result<QElement> {
    covariant(f, CovBase::XP, h)
}

/// Left-multiplied variant `[x, H]^-1 · [f, H]`. Exploration only; it differs from
/// [`cov_x`] by a power of `q` and takes no part in the identities.
pub fn cov_x_left(f: &QElement, h: &Hamiltonian) -> Result<QElement> {
    let inv = inverse_bracket(&QElement::x(), CovBase::X, h)?;
    Ok(inv.product(&time_derivative(f, h)))
}

/// `∇_[x,p] f = (1 - q)^-1 ∇_xp f`, using `[x, p] = (1 - q) x p`.
pub fn cov_bracket(f: &QElement, h: &Hamiltonian) -> Result<QElement> {
    let scale = (QScalar::one() - QScalar::q()).inv()?;
    Ok(cov_xp(f, h)?.scalar_mul(&scale))
}

/// `∇_(λx) f = [f, H] · [λ x, H]^-1`, computed directly from the scaled base.
pub fn scaled_base_cov(f: &QElement, lambda: &QScalar, h: &Hamiltonian) -> Result<QElement> {
    if lambda.is_zero() {
        return Err(QError::DivisionByZero);
    }
    let base = QElement::x().scalar_mul(lambda);
    let inv = inverse_bracket(&base, CovBase::ScaledX, h)?;
    Ok(time_derivative(f, h).product(&inv))
}
