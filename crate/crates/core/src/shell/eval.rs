use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::parse::{Ast, AstKind, Span, Var};
use super::{SessionConfig, ShellError};
use crate::error::QError;
use crate::qcalculus::{
    compare_3_14, d_p, d_x, mixed_commutator, paper_formula_3_14, ComparisonReport,
};
use crate::qcurvature::{curvature, CurvatureResult};
use crate::qfield::QScalar;
use crate::qmech::{cov_bracket, cov_p, cov_x, cov_xp, time_derivative, Hamiltonian};
use crate::qplane::{ClassicalPoly, QElement};

/// Result of evaluating an expression: an algebra element or one of the report objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Element(QElement),
    Classical(ClassicalPoly),
    Curvature(CurvatureResult),
    Comparison(ComparisonReport),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Element(_) => "element",
            Value::Classical(_) => "classical limit",
            Value::Curvature(_) => "curvature report",
            Value::Comparison(_) => "comparison report",
        }
    }
}

/// Names accepted in call position.
pub const FUNCTIONS: &[&str] = &[
    "dx",
    "dp",
    "mixed",
    "ddt",
    "grad_x",
    "grad_p",
    "grad_xp",
    "grad_bracket",
    "curv",
    "inv",
    "limit1",
    "subst",
    "f314",
    "cmp314",
];

pub(super) struct Evaluator<'a> {
    pub cfg: &'a SessionConfig,
    pub vars: &'a BTreeMap<String, QElement>,
}

impl Evaluator<'_> {
    fn math(&self, span: Span, err: QError) -> ShellError {
        ShellError::Math {
            error: err,
            line: span.line,
            col: span.col,
        }
    }

    fn element(&self, ast: &Ast) -> Result<QElement, ShellError> {
        match self.eval(ast)? {
            Value::Element(e) => Ok(e),
            other => Err(ShellError::Usage(format!(
                "{}:{}: expected an element, found a {}",
                ast.span.line,
                ast.span.col,
                other.kind()
            ))),
        }
    }

    fn integer(&self, ast: &Ast) -> Result<i64, ShellError> {
        let e = self.element(ast)?;
        e.as_constant()
            .and_then(|c| c.as_rational())
            .filter(|r| r.is_integer())
            .and_then(|r| r.to_integer().to_i64())
            .ok_or_else(|| {
                ShellError::Usage(format!(
                    "{}:{}: expected an integer constant",
                    ast.span.line, ast.span.col
                ))
            })
    }

    fn hamiltonian(&self, args: &[Ast], span: Span) -> Result<Hamiltonian, ShellError> {
        match args.get(1) {
            Some(h) => Ok(Hamiltonian::new(self.element(h)?)),
            None => self
                .vars
                .get("H")
                .cloned()
                .map(Hamiltonian::new)
                .ok_or_else(|| {
                    ShellError::Usage(format!(
                        "{}:{}: no Hamiltonian given and no session variable H bound",
                        span.line, span.col
                    ))
                }),
        }
    }

    fn call(&self, name: &str, args: &[Ast], span: Span) -> Result<Value, ShellError> {
        let arity = |lo: usize, hi: usize| -> Result<(), ShellError> {
            if args.len() < lo || args.len() > hi {
                let want = if lo == hi {
                    lo.to_string()
                } else {
                    format!("{lo} or {hi}")
                };
                return Err(ShellError::Usage(format!(
                    "{}:{}: {name} takes {want} argument(s), got {}",
                    span.line,
                    span.col,
                    args.len()
                )));
            }
            Ok(())
        };
        let calc = self.cfg.calculus();
        let el = Value::Element;
        match name {
            "dx" => {
                arity(1, 1)?;
                Ok(el(d_x(&self.element(&args[0])?, &calc)))
            }
            "dp" => {
                arity(1, 1)?;
                Ok(el(d_p(&self.element(&args[0])?)))
            }
            "mixed" => {
                arity(1, 1)?;
                Ok(el(mixed_commutator(&self.element(&args[0])?, &calc)))
            }
            "ddt" | "grad_x" | "grad_p" | "grad_xp" | "grad_bracket" | "curv" => {
                arity(1, 2)?;
                let f = self.element(&args[0])?;
                let h = self.hamiltonian(args, span)?;
                let out = match name {
                    "ddt" => Ok(time_derivative(&f, &h)),
                    "grad_x" => cov_x(&f, &h),
                    "grad_p" => cov_p(&f, &h),
                    "grad_xp" => cov_xp(&f, &h),
                    "grad_bracket" => cov_bracket(&f, &h),
                    _ => return Ok(Value::Curvature(curvature(&f, &h, &calc))),
                };
                out.map(el).map_err(|e| self.math(span, e))
            }
            "inv" => {
                arity(1, 1)?;
                self.element(&args[0])?
                    .invert()
                    .map(el)
                    .map_err(|e| self.math(span, e))
            }
            "limit1" => {
                arity(1, 1)?;
                self.element(&args[0])?
                    .classical_limit()
                    .map(Value::Classical)
                    .map_err(|e| self.math(span, e))
            }
            "subst" => {
                arity(3, 3)?;
                let f = self.element(&args[0])?;
                let k = self.integer(&args[1])?;
                let l = self.integer(&args[2])?;
                Ok(el(f.scale_substitute(k, l)))
            }
            "f314" => {
                arity(1, 1)?;
                Ok(el(paper_formula_3_14(&self.element(&args[0])?)))
            }
            "cmp314" => {
                arity(1, 1)?;
                Ok(Value::Comparison(compare_3_14(
                    &self.element(&args[0])?,
                    &calc,
                )))
            }
            _ => Err(ShellError::Usage(format!(
                "{}:{}: unknown function {name:?}; available: {}",
                span.line,
                span.col,
                FUNCTIONS.join(", ")
            ))),
        }
    }

    pub fn eval(&self, ast: &Ast) -> Result<Value, ShellError> {
        let el = |e: QElement| Ok(Value::Element(e));
        match &ast.kind {
            AstKind::Var(Var::X) => el(QElement::x()),
            AstKind::Var(Var::P) => el(QElement::p()),
            AstKind::QVar => el(QElement::constant(QScalar::q())),
            AstKind::Rational(n, d) => {
                if d.is_zero() {
                    return Err(self.math(ast.span, QError::DivisionByZero));
                }
                let r = BigRational::new(n.clone(), d.clone());
                el(QElement::constant(QScalar::from_rational(&r)))
            }
            AstKind::Ident(name) => {
                self.vars
                    .get(name)
                    .cloned()
                    .map(Value::Element)
                    .ok_or_else(|| {
                        ShellError::Usage(format!(
                            "{}:{}: unbound variable {name:?}",
                            ast.span.line, ast.span.col
                        ))
                    })
            }
            AstKind::Add(a, b) => el(&self.element(a)? + &self.element(b)?),
            AstKind::Sub(a, b) => el(&self.element(a)? - &self.element(b)?),
            AstKind::Mul(a, b) => el(self.element(a)?.product(&self.element(b)?)),
            AstKind::Neg(a) => el(-&self.element(a)?),
            AstKind::Bracket(a, b) => el(self.element(a)?.commutator(&self.element(b)?)),
            AstKind::Pow(base, k) => {
                let b = self.element(base)?;
                b.pow(*k)
                    .map(Value::Element)
                    .map_err(|e| self.math(ast.span, e))
            }
            AstKind::Call(name, args) => self.call(name, args, ast.span),
        }
    }
}
