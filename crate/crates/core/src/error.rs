use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::qplane::Monomial;

/// Which commutator a covariant derivative tried to invert.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CovBase {
    X,
    P,
    XP,
    /// `lambda * x`
    ScaledX,
}

impl fmt::Display for CovBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CovBase::X => "x",
            CovBase::P => "p",
            CovBase::XP => "x*p",
            CovBase::ScaledX => "lambda*x",
        })
    }
}

/// Errors raised by the algebra, calculus and curvature layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at q = {point}")]
    PoleAtPoint { point: BigRational },
    #[error("pole at q = 1{}", .monomial.map(|m| format!(" in the coefficient of {m}")).unwrap_or_default())]
    PoleAtOne { monomial: Option<Monomial> },
    #[error("element with {terms} terms is not invertible (only nonzero monomials are units)")]
    NonInvertible { terms: usize },
    #[error("commutator [{base}, H] has {terms} terms and is not invertible")]
    NonInvertibleCommutator { base: CovBase, terms: usize },
    #[error("cannot move a derivative past a negative power of {generator}")]
    UnsupportedNegativePower { generator: char },
    #[error("invalid sample points: {0}")]
    InvalidSamples(String),
}

pub type Result<T, E = QError> = std::result::Result<T, E>;
