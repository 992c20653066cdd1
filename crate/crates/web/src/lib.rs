//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain strings and returns a JSON string with either an
//! `ok` payload or an `error` message plus the CLI-equivalent exit code.

use num_traits::ToPrimitive;
use quantum_plane::qcalculus::compare_3_14;
use quantum_plane::qcurvature::{default_samples, flatness_report, Norm};
use quantum_plane::shell::{
    parse_rational, render, OutputFormat, Session, SessionConfig, ShellError,
};
use quantum_plane::Hamiltonian;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn failure(err: &ShellError) -> String {
    json!({ "error": err.to_string(), "exit_code": err.exit_code() }).to_string()
}

fn session(format: &str, mixed_exponent: i32) -> Result<Session, ShellError> {
    let output_format: OutputFormat = format.parse().map_err(ShellError::Usage)?;
    Ok(Session::new(SessionConfig {
        mixed_term_exponent: mixed_exponent.into(),
        output_format,
        numeric_q: None,
    }))
}

/// Evaluates `expr`; a nonempty `hamiltonian` is bound to `H` first.
#[wasm_bindgen]
pub fn evaluate(expr: &str, hamiltonian: &str, format: &str, mixed_exponent: i32) -> String {
    let run = || -> Result<String, ShellError> {
        let mut s = session(format, mixed_exponent)?;
        if !hamiltonian.trim().is_empty() {
            let h = s.eval_element(hamiltonian)?;
            s.bind("H", h);
        }
        Ok(render(&s.eval_str(expr)?, &s.config))
    };
    match run() {
        Ok(out) => json!({ "ok": out }).to_string(),
        Err(e) => failure(&e),
    }
}

fn plot_value(n: &Norm) -> Value {
    match n {
        Norm::Value(v) => json!(v.to_f64()),
        Norm::Undefined => json!("undefined"),
        Norm::Pole => json!("pole"),
    }
}

/// Flatness curve of the curvature of `f` under `h`; `samples` is a comma list
/// of rationals, empty for the default points approaching 1.
#[wasm_bindgen]
pub fn flatness_curve(f: &str, h: &str, samples: &str, mixed_exponent: i32) -> String {
    let run = || -> Result<Value, ShellError> {
        let s = session("text", mixed_exponent)?;
        let f = s.eval_element(f)?;
        let h = Hamiltonian::new(s.eval_element(h)?);
        let samples = if samples.trim().is_empty() {
            default_samples()
        } else {
            samples
                .split(',')
                .map(|t| parse_rational(t).map_err(ShellError::Usage))
                .collect::<Result<_, _>>()?
        };
        let report = flatness_report(&f, &h, &s.config.calculus(), &samples).map_err(|error| {
            ShellError::Math {
                error,
                line: 1,
                col: 1,
            }
        })?;
        let points: Vec<Value> = report
            .rows
            .iter()
            .map(|r| {
                json!({
                    "q0": r.q0.to_f64(),
                    "commutator": plot_value(&r.commutator_norm),
                    "connection": plot_value(&r.connection_norm),
                    "total": plot_value(&r.total_norm),
                })
            })
            .collect();
        Ok(json!({ "points": points, "table": report.to_table(), "report": report.to_json() }))
    };
    match run() {
        Ok(v) => json!({ "ok": v }).to_string(),
        Err(e) => failure(&e),
    }
}

/// Term-by-term comparison of the engine's commutator part with the printed closed form.
#[wasm_bindgen]
pub fn compare_closed_form(f: &str, mixed_exponent: i32) -> String {
    let run = || -> Result<Value, ShellError> {
        let s = session("text", mixed_exponent)?;
        let report = compare_3_14(&s.eval_element(f)?, &s.config.calculus());
        let exponents: Vec<Option<i64>> =
            report.rows.iter().map(|r| r.ratio_q_exponent()).collect();
        Ok(json!({
            "table": report.to_table(),
            "supports_match": report.supports_match(),
            "ratio_q_exponents": exponents,
        }))
    };
    match run() {
        Ok(v) => json!({ "ok": v }).to_string(),
        Err(e) => failure(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parsed(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn evaluate_reports_errors_with_exit_codes() {
        let v = parsed(evaluate("p*x", "", "text", 2));
        assert_eq!(
            v["ok"],
            "# mixed_term_exponent=2 format=text q=symbolic\nq * x * p\n"
        );
        assert_eq!(parsed(evaluate("x +", "", "text", 2))["exit_code"], 1);
        assert_eq!(
            parsed(evaluate("grad_x(p)", "x", "text", 2))["exit_code"],
            2
        );
        assert_eq!(parsed(evaluate("x", "", "yaml", 2))["exit_code"], 1);
    }

    #[test]
    fn flatness_points() {
        let v = parsed(flatness_curve("x*p", "x", "1/2, 9/10", 2));
        let pts = v["ok"]["points"].as_array().unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0]["commutator"], 1.0);
        assert_eq!(pts[1]["connection"], 10.0);
        assert!(v["ok"]["table"].as_str().unwrap().contains("PoleAtOne"));
        assert_eq!(parsed(flatness_curve("x*p", "x", "1", 2))["exit_code"], 2);
    }

    #[test]
    fn comparison_exponents() {
        let v = parsed(compare_closed_form("x^2*p^2", 2));
        assert_eq!(v["ok"]["supports_match"], true);
        assert_eq!(v["ok"]["ratio_q_exponents"], json!([-6]));
    }
}
