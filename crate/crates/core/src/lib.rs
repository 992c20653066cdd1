//! Exact computer algebra for the q-deformed quantum plane.
//!
//! Layers, bottom up:
//!
//! - [`qfield`]: the coefficient field `Q(q)` with fully reduced rational functions.
//! - [`qplane`]: normal-ordered Laurent polynomials in `x, p` with `p x = q x p`.
//! - [`qcalculus`]: q-derivatives, both as an operator-rewriting engine and in closed form.
//! - [`qmech`]: time derivative `[f, H]` and the covariant derivatives it induces.
//! - [`qcurvature`]: the curvature tensor and its `q -> 1` flatness reports.
//! - [`shell`]: expression language, printers and the interactive session.

pub mod error;
pub mod qcalculus;
pub mod qcurvature;
pub mod qfield;
pub mod qmech;
pub mod qplane;
pub mod shell;

pub use error::{CovBase, QError};
pub use qcalculus::CalculusConfig;
pub use qfield::{IntPoly, QScalar};
pub use qmech::Hamiltonian;
pub use qplane::{ClassicalPoly, Monomial, QElement};
