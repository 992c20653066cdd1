//! Surface syntax: parser, evaluator, printers and a line-oriented session.

mod eval;
pub mod parse;
pub mod print;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value as Json};
use thiserror::Error;

pub use eval::{Value, FUNCTIONS};
pub use parse::{parse, Ast, AstKind, ParseError, Span};

use crate::error::QError;
use crate::qcalculus::CalculusConfig;
use crate::qplane::QElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Latex,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "latex" => Ok(OutputFormat::Latex),
            other => Err(format!(
                "unknown format {other:?} (expected text, json or latex)"
            )),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Text => "text",
            OutputFormat::Json => "json",
            OutputFormat::Latex => "latex",
        })
    }
}

/// Parses `3`, `-3/4` or `(3/4)` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let t = s
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| format!("invalid rational {s:?}"))?;
    let d: BigInt = d.parse().map_err(|_| format!("invalid rational {s:?}"))?;
    if d == BigInt::from(0) {
        return Err(format!("invalid rational {s:?}: zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionConfig {
    pub mixed_term_exponent: i64,
    pub output_format: OutputFormat,
    /// When set, results are specialized at this value of `q`.
    pub numeric_q: Option<BigRational>,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            mixed_term_exponent: CalculusConfig::default().mixed_term_exponent,
            output_format: OutputFormat::Text,
            numeric_q: None,
        }
    }
}

impl SessionConfig {
    pub fn calculus(&self) -> CalculusConfig {
        CalculusConfig {
            mixed_term_exponent: self.mixed_term_exponent,
        }
    }

    pub fn header(&self) -> String {
        let q = self
            .numeric_q
            .as_ref()
            .map_or_else(|| "symbolic".to_string(), |r| r.to_string());
        format!(
            "mixed_term_exponent={} format={} q={}",
            self.mixed_term_exponent, self.output_format, q
        )
    }

    fn to_json(&self) -> Json {
        json!({
            "mixed_term_exponent": self.mixed_term_exponent,
            "output_format": self.output_format.to_string(),
            "numeric_q": self.numeric_q.as_ref().map(|r| r.to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShellError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    /// Unknown names, wrong arity, wrong argument kinds.
    #[error("{0}")]
    Usage(String),
    #[error("{line}:{col}: {error}")]
    Math {
        error: QError,
        line: usize,
        col: usize,
    },
}

impl ShellError {
    /// Process exit status: 1 for malformed input, 2 for mathematical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            ShellError::Parse(_) | ShellError::Usage(_) => 1,
            ShellError::Math { .. } => 2,
        }
    }
}

fn specialize(v: Value, q0: &BigRational) -> Result<Value, QError> {
    Ok(match v {
        Value::Element(e) => Value::Element(e.eval_at(q0)?),
        Value::Curvature(c) => Value::Curvature(c.eval_at(q0)?),
        other => other,
    })
}

fn body_text(v: &Value) -> String {
    match v {
        Value::Element(e) => format!("{e}\n"),
        Value::Classical(c) => format!("{c}\n"),
        Value::Curvature(c) => c.to_text(),
        Value::Comparison(r) => r.to_table(),
    }
}

fn body_latex(v: &Value) -> String {
    match v {
        Value::Element(e) => format!("{}\n", print::element_latex(e)),
        Value::Curvature(c) => {
            let part = |r: &Result<QElement, QError>| match r {
                Ok(e) => print::element_latex(e),
                Err(err) => format!("\\text{{undefined: {err}}}"),
            };
            let total = c
                .total
                .as_ref()
                .map_or_else(|| "\\text{undefined}".to_string(), print::element_latex);
            format!(
                "[\\nabla_x,\\nabla_p]f = {}\n\\nabla_{{[x,p]}}f = {}\nR(x,p)f = {}\n",
                print::element_latex(&c.commutator_part),
                part(&c.connection_part),
                total
            )
        }
        other => body_text(other),
    }
}

fn body_json(v: &Value) -> Json {
    match v {
        Value::Element(e) => json!(e),
        Value::Classical(c) => json!({ "classical_limit": c.to_string() }),
        Value::Curvature(c) => c.to_json(),
        Value::Comparison(r) => json!(r),
    }
}

/// Renders a value with the configuration header, deterministically.
pub fn render(v: &Value, cfg: &SessionConfig) -> String {
    match cfg.output_format {
        OutputFormat::Text => format!("# {}\n{}", cfg.header(), body_text(v)),
        OutputFormat::Latex => format!("% {}\n{}", cfg.header(), body_latex(v)),
        OutputFormat::Json => {
            let doc = json!({ "config": cfg.to_json(), "result": body_json(v) });
            serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n"
        }
    }
}

/// Evaluator state: configuration plus session-variable bindings.
#[derive(Debug, Clone, Default)]
pub struct Session {
    pub config: SessionConfig,
    vars: BTreeMap<String, QElement>,
}

impl Session {
    pub fn new(config: SessionConfig) -> Self {
        Session {
            config,
            vars: BTreeMap::new(),
        }
    }

    pub fn bind(&mut self, name: impl Into<String>, value: QElement) {
        self.vars.insert(name.into(), value);
    }

    pub fn vars(&self) -> &BTreeMap<String, QElement> {
        &self.vars
    }

    /// Evaluates an AST without specializing `q`.
    pub fn eval_ast(&self, ast: &Ast) -> Result<Value, ShellError> {
        eval::Evaluator {
            cfg: &self.config,
            vars: &self.vars,
        }
        .eval(ast)
    }

    /// Parses and evaluates; applies `numeric_q` when configured.
    pub fn eval_str(&self, src: &str) -> Result<Value, ShellError> {
        let v = self.eval_ast(&parse(src)?)?;
        match &self.config.numeric_q {
            Some(q0) => specialize(v, q0).map_err(|error| ShellError::Math {
                error,
                line: 1,
                col: 1,
            }),
            None => Ok(v),
        }
    }

    /// Parses and evaluates an expression that must produce an element.
    pub fn eval_element(&self, src: &str) -> Result<QElement, ShellError> {
        match self.eval_str(src)? {
            Value::Element(e) => Ok(e),
            other => Err(ShellError::Usage(format!(
                "expected an element, got {other:?}"
            ))),
        }
    }

    /// One REPL line: `:command`, `name = expr`, or an expression.
    /// Returns the text to print, if any.
    pub fn execute_line(&mut self, line: &str) -> Result<Option<String>, ShellError> {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return Ok(None);
        }
        if let Some(cmd) = line.strip_prefix(':') {
            return self.command(cmd).map(Some);
        }
        if let Some((lhs, rhs)) = line.split_once('=') {
            let name = lhs.trim();
            if is_bindable(name) {
                let value = match self.eval_str(rhs)? {
                    Value::Element(e) => e,
                    other => {
                        return Err(ShellError::Usage(format!(
                            "only elements can be bound, {name} would be {other:?}"
                        )))
                    }
                };
                let shown = render(&Value::Element(value.clone()), &self.config);
                self.vars.insert(name.to_string(), value);
                return Ok(Some(shown));
            }
        }
        let v = self.eval_str(line)?;
        Ok(Some(render(&v, &self.config)))
    }

    fn command(&mut self, cmd: &str) -> Result<String, ShellError> {
        let mut parts = cmd.split_whitespace();
        let name = parts.next().unwrap_or("");
        let arg = parts.next();
        let usage = |m: String| ShellError::Usage(m);
        match (name, arg) {
            ("format", Some(f)) => {
                self.config.output_format = f.parse().map_err(usage)?;
            }
            ("q", Some("off" | "symbolic")) => self.config.numeric_q = None,
            ("q", Some(r)) => self.config.numeric_q = Some(parse_rational(r).map_err(usage)?),
            ("mixed", Some(m)) => {
                self.config.mixed_term_exponent =
                    m.parse().map_err(|_| usage(format!("invalid exponent {m:?}")))?;
            }
            ("config", None) => {}
            ("vars", None) => {
                let mut out = String::new();
                for (k, v) in &self.vars {
                    out.push_str(&format!("{k} = {v}\n"));
                }
                return Ok(out);
            }
            ("help", None) => {
                return Ok(format!(
                    "functions: {}\ncommands: :format text|json|latex, :q <rational>|off, :mixed <int>, :vars, :config, :quit\n",
                    FUNCTIONS.join(", ")
                ))
            }
            _ => return Err(usage(format!("unknown command :{cmd}"))),
        }
        Ok(format!("# {}\n", self.config.header()))
    }
}

fn is_bindable(name: &str) -> bool {
    let mut chars = name.chars();
    let ok_start = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    ok_start
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(name, "x" | "p" | "y" | "q")
        && !FUNCTIONS.contains(&name)
}
