//! Curvature `R(x, p) f = [∇x, ∇p] f - ∇_[x,p] f` and its behaviour as `q -> 1`.
//!
//! The commutator part is `(1 - q) ∂x ∂p f`; the connection part is
//! `(1 - q)^-1 ∇_xp f` and depends on the Hamiltonian. Both are kept separately
//! so that a missing connection part or a pole at `q = 1` is reported, not hidden.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{QError, Result};
use crate::qcalculus::{mixed_commutator, paper_formula_3_14, CalculusConfig};
use crate::qfield::QScalar;
use crate::qmech::{cov_bracket, cov_p, cov_x, Hamiltonian};
use crate::qplane::{ClassicalPoly, QElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureResult {
    pub commutator_part: QElement,
    /// `Err` carries the reason the connection part is undefined.
    pub connection_part: Result<QElement>,
    /// `commutator_part - connection_part` when the latter is defined.
    pub total: Option<QElement>,
    pub config: CalculusConfig,
}

impl CurvatureResult {
    pub fn to_json(&self) -> Value {
        json!({
            "config": self.config,
            "commutator_part": self.commutator_part,
            "connection_part": match &self.connection_part {
                Ok(e) => json!(e),
                Err(err) => json!({ "error": err.to_string() }),
            },
            "total": self.total,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# curvature mixed_term_exponent={}\n",
            self.config.mixed_term_exponent
        );
        out.push_str(&format!("commutator_part = {}\n", self.commutator_part));
        match &self.connection_part {
            Ok(e) => out.push_str(&format!("connection_part = {e}\n")),
            Err(err) => out.push_str(&format!("connection_part = undefined ({err})\n")),
        }
        match &self.total {
            Some(t) => out.push_str(&format!("total = {t}\n")),
            None => out.push_str("total = undefined\n"),
        }
        out
    }

    /// Specializes every defined part at `q = q0`.
    pub fn eval_at(&self, q0: &BigRational) -> Result<CurvatureResult> {
        Ok(CurvatureResult {
            commutator_part: self.commutator_part.eval_at(q0)?,
            connection_part: match &self.connection_part {
                Ok(e) => Ok(e.eval_at(q0)?),
                Err(err) => Err(err.clone()),
            },
            total: self.total.as_ref().map(|t| t.eval_at(q0)).transpose()?,
            config: self.config,
        })
    }
}

pub fn curvature(f: &QElement, h: &Hamiltonian, cfg: &CalculusConfig) -> CurvatureResult {
    let commutator_part = mixed_commutator(f, cfg);
    let connection_part = cov_bracket(f, h);
    let total = connection_part.as_ref().ok().map(|c| &commutator_part - c);
    CurvatureResult {
        commutator_part,
        connection_part,
        total,
        config: *cfg,
    }
}

/// The printed final formula: the closed-form commutator sum minus
/// `(1 - q)^-1 (x ∇p(f)^-1 + ∇x(f)^-1 p)^-1`.
pub fn paper_final_formula(f: &QElement, h: &Hamiltonian) -> Result<QElement> {
    let inv_cov_p = cov_p(f, h)?.invert()?;
    let inv_cov_x = cov_x(f, h)?.invert()?;
    let sum = &QElement::x().product(&inv_cov_p) + &inv_cov_x.product(&QElement::p());
    let scale = (QScalar::one() - QScalar::q()).inv()?;
    Ok(&paper_formula_3_14(f) - &sum.invert()?.scalar_mul(&scale))
}

/// `∇x ∇p f - ∇p ∇x f` composed from the Hamiltonian-dependent derivatives.
pub fn direct_commutator(f: &QElement, h: &Hamiltonian) -> Result<QElement> {
    Ok(&cov_x(&cov_p(f, h)?, h)? - &cov_p(&cov_x(f, h)?, h)?)
}

/// Default sample points approaching `q = 1` from below.
pub fn default_samples() -> Vec<BigRational> {
    [(1, 2), (3, 4), (9, 10), (99, 100), (999, 1000)]
        .into_iter()
        .map(|(n, d)| BigRational::new(n.into(), d.into()))
        .collect()
}

/// One cell of a flatness row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Norm {
    Value(BigRational),
    /// The part is undefined for this Hamiltonian.
    Undefined,
    /// Some coefficient has a pole at the sample point.
    Pole,
}

impl Norm {
    fn of(part: Option<&QElement>, q0: &BigRational) -> Norm {
        let Some(e) = part else {
            return Norm::Undefined;
        };
        let mut max = BigRational::zero();
        for (_, c) in e.terms() {
            match c.eval_at(q0) {
                Ok(v) => max = max.max(v.abs()),
                Err(_) => return Norm::Pole,
            }
        }
        Norm::Value(max)
    }

    pub fn value(&self) -> Option<&BigRational> {
        match self {
            Norm::Value(v) => Some(v),
            _ => None,
        }
    }

    fn exact(&self) -> Value {
        match self {
            Norm::Value(v) => json!(v.to_string()),
            Norm::Undefined => json!("undefined"),
            Norm::Pole => json!("pole"),
        }
    }

    fn csv_cell(&self) -> String {
        match self {
            Norm::Value(v) => decimal(v),
            Norm::Undefined => String::new(),
            Norm::Pole => "pole".to_string(),
        }
    }
}

fn decimal(v: &BigRational) -> String {
    v.to_f64().map_or_else(|| v.to_string(), |f| f.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatnessRow {
    pub q0: BigRational,
    pub commutator_norm: Norm,
    pub connection_norm: Norm,
    pub total_norm: Norm,
}

impl FlatnessRow {
    /// True when a pole forced this sample to be skipped.
    pub fn skipped(&self) -> bool {
        [
            &self.commutator_norm,
            &self.connection_norm,
            &self.total_norm,
        ]
        .iter()
        .any(|n| matches!(n, Norm::Pole))
    }
}

/// Max-coefficient norms of each curvature part at sample points, plus exact `q -> 1` limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatnessReport {
    pub config: CalculusConfig,
    pub rows: Vec<FlatnessRow>,
    pub commutator_limit: Result<ClassicalPoly>,
    pub connection_limit: Result<ClassicalPoly>,
    pub total_limit: Result<ClassicalPoly>,
}

fn limit_text(l: &Result<ClassicalPoly>) -> String {
    match l {
        Ok(p) => p.to_string(),
        Err(QError::PoleAtOne { .. }) => format!("PoleAtOne ({})", l.as_ref().unwrap_err()),
        Err(e) => format!("undefined ({e})"),
    }
}

fn limit_json(l: &Result<ClassicalPoly>) -> Value {
    match l {
        Ok(p) => json!({ "value": p.to_string() }),
        Err(e @ QError::PoleAtOne { .. }) => json!({ "pole_at_one": e.to_string() }),
        Err(e) => json!({ "undefined": e.to_string() }),
    }
}

impl FlatnessReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q0,commutator_norm,connection_norm,total_norm\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                decimal(&r.q0),
                r.commutator_norm.csv_cell(),
                r.connection_norm.csv_cell(),
                r.total_norm.csv_cell()
            ));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "q0": r.q0.to_string(),
                    "commutator_norm": r.commutator_norm.exact(),
                    "connection_norm": r.connection_norm.exact(),
                    "total_norm": r.total_norm.exact(),
                    "skipped": r.skipped(),
                })
            })
            .collect();
        json!({
            "config": self.config,
            "rows": rows,
            "limits": {
                "commutator_part": limit_json(&self.commutator_limit),
                "connection_part": limit_json(&self.connection_limit),
                "total": limit_json(&self.total_limit),
            }
        })
    }

    pub fn to_table(&self) -> String {
        let header = ["q0", "commutator_norm", "connection_norm", "total_norm"];
        let cell = |n: &Norm| match n {
            Norm::Value(v) => v.to_string(),
            Norm::Undefined => "undefined".to_string(),
            Norm::Pole => "pole (skipped)".to_string(),
        };
        let rows: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.q0.to_string(),
                    cell(&r.commutator_norm),
                    cell(&r.connection_norm),
                    cell(&r.total_norm),
                ]
            })
            .collect();
        let mut out = format!(
            "# flatness mixed_term_exponent={}\n",
            self.config.mixed_term_exponent
        );
        out.push_str(&crate::shell::print::aligned_table(&header, &rows));
        out.push_str(&format!(
            "limit q->1 commutator_part: {}\n",
            limit_text(&self.commutator_limit)
        ));
        out.push_str(&format!(
            "limit q->1 connection_part: {}\n",
            limit_text(&self.connection_limit)
        ));
        out.push_str(&format!(
            "limit q->1 total: {}\n",
            limit_text(&self.total_limit)
        ));
        out
    }
}

fn check_samples(samples: &[BigRational]) -> Result<()> {
    if samples.is_empty() {
        return Err(QError::InvalidSamples("no sample points".into()));
    }
    if let Some(s) = samples.iter().find(|s| s.is_one()) {
        return Err(QError::InvalidSamples(format!(
            "{s} is the limit point itself"
        )));
    }
    if samples.windows(2).any(|w| w[0] >= w[1]) {
        return Err(QError::InvalidSamples(
            "samples must be strictly increasing".into(),
        ));
    }
    Ok(())
}

pub fn flatness_report(
    f: &QElement,
    h: &Hamiltonian,
    cfg: &CalculusConfig,
    samples: &[BigRational],
) -> Result<FlatnessReport> {
    check_samples(samples)?;
    let curv = curvature(f, h, cfg);
    let connection = curv.connection_part.as_ref().ok();
    let rows = samples
        .iter()
        .map(|q0| FlatnessRow {
            q0: q0.clone(),
            commutator_norm: Norm::of(Some(&curv.commutator_part), q0),
            connection_norm: Norm::of(connection, q0),
            total_norm: Norm::of(curv.total.as_ref(), q0),
        })
        .collect();
    let undefined = |e: &QError| Err(e.clone());
    Ok(FlatnessReport {
        config: *cfg,
        rows,
        commutator_limit: curv.commutator_part.classical_limit(),
        connection_limit: match &curv.connection_part {
            Ok(c) => c.classical_limit(),
            Err(e) => undefined(e),
        },
        total_limit: match (&curv.total, &curv.connection_part) {
            (Some(t), _) => t.classical_limit(),
            (None, Err(e)) => undefined(e),
            (None, Ok(_)) => unreachable!("total is defined whenever the connection part is"),
        },
    })
}
