//! Text and LaTeX rendering. Text output is valid input for the parser.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::qfield::{IntPoly, QScalar};
use crate::qplane::{Monomial, QElement};

fn q_power_text(k: i64) -> Option<String> {
    match k {
        0 => None,
        1 => Some("q".into()),
        k => Some(format!("q^{k}")),
    }
}

/// Single-term view `a q^k` of a polynomial.
fn single_term(p: &IntPoly) -> Option<(BigInt, i64)> {
    if p.num_terms() != 1 {
        return None;
    }
    p.terms().next().map(|(d, c)| (c.clone(), d as i64))
}

/// Sign and multiplicative factors of a coefficient; no factors means magnitude one.
fn scalar_factors(c: &QScalar) -> (bool, Vec<String>) {
    let num = c.numer();
    let den = c.denom();
    let mut factors = Vec::new();
    // Denominator as d * q^k when it is a single term.
    let den_single = single_term(den);
    let (den_const, den_shift) = match &den_single {
        Some((d, k)) => (d.clone(), *k),
        None => (BigInt::one(), 0),
    };
    let mut neg = false;
    match single_term(num) {
        Some((a, k)) => {
            neg = a.is_negative();
            let a = a.abs();
            if !den_const.is_one() {
                factors.push(format!("({a}/{den_const})"));
            } else if !a.is_one() {
                factors.push(a.to_string());
            }
            factors.extend(q_power_text(k - den_shift));
        }
        None => {
            if !den_const.is_one() {
                factors.push(format!("(1/{den_const})"));
            }
            factors.push(format!("({num})"));
            factors.extend(q_power_text(-den_shift));
        }
    }
    if den_single.is_none() {
        factors.push(format!("({den})^-1"));
    }
    (neg, factors)
}

/// Standalone, parseable text for a coefficient.
pub fn scalar_text(c: &QScalar) -> String {
    if c.is_zero() {
        return "0".into();
    }
    let (neg, factors) = scalar_factors(c);
    let body = if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join(" * ")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn monomial_factors(m: &Monomial) -> Vec<String> {
    let mut out = Vec::new();
    for (name, e) in [("x", m.i), ("p", m.j)] {
        match e {
            0 => {}
            1 => out.push(name.to_string()),
            e => out.push(format!("{name}^{e}")),
        }
    }
    out
}

/// Sum of `c * x^i * p^j` terms in ascending `(i, j)` order.
pub fn element_text(e: &QElement) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, (m, c)) in e.terms().enumerate() {
        let (neg, mut factors) = scalar_factors(c);
        factors.extend(monomial_factors(m));
        let body = if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join(" * ")
        };
        match (n, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

fn poly_latex(p: &IntPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, (d, c)) in p.terms().enumerate() {
        let mag = c.abs();
        match (n, c.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let coeff = if mag.is_one() && d != 0 {
            String::new()
        } else {
            mag.to_string()
        };
        let var = match d {
            0 => String::new(),
            1 => "q".into(),
            d => format!("q^{{{d}}}"),
        };
        out.push_str(&coeff);
        out.push_str(&var);
    }
    out
}

/// Sign and LaTeX body of a coefficient; `None` body means magnitude one.
fn scalar_latex_parts(c: &QScalar) -> (bool, Option<String>) {
    let num = c.numer();
    let den = c.denom();
    let (neg, num_tex) = match single_term(num) {
        Some((a, k)) => {
            let a = a.abs();
            let mut s = if a.is_one() && k != 0 {
                String::new()
            } else {
                a.to_string()
            };
            s.push_str(&match k {
                0 => String::new(),
                1 => "q".into(),
                k => format!("q^{{{k}}}"),
            });
            (
                c.numer().leading_coeff().is_some_and(|l| l.is_negative()),
                s,
            )
        }
        None => (false, poly_latex(num)),
    };
    if den.is_one() {
        if single_term(num).is_some() {
            return (neg, (num_tex != "1").then_some(num_tex));
        }
        return (neg, Some(format!("\\left({num_tex}\\right)")));
    }
    (
        neg,
        Some(format!("\\frac{{{num_tex}}}{{{}}}", poly_latex(den))),
    )
}

pub fn scalar_latex(c: &QScalar) -> String {
    if c.is_zero() {
        return "0".into();
    }
    let (neg, body) = scalar_latex_parts(c);
    let body = body.unwrap_or_else(|| "1".into());
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

pub fn element_latex(e: &QElement) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, (m, c)) in e.terms().enumerate() {
        let (neg, coeff) = scalar_latex_parts(c);
        let mut factors: Vec<String> = coeff.into_iter().collect();
        for (name, k) in [("x", m.i), ("p", m.j)] {
            match k {
                0 => {}
                1 => factors.push(name.into()),
                k => factors.push(format!("{name}^{{{k}}}")),
            }
        }
        if factors.is_empty() {
            factors.push("1".into());
        }
        match (n, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&factors.join("\\,"));
    }
    out
}

/// Left-aligned columns separated by two spaces, with a dashed rule under the header.
pub fn aligned_table<const N: usize>(header: &[&str; N], rows: &[[String; N]]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r.iter()) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&line(rule.iter().map(String::as_str).collect()));
    for r in rows {
        out.push_str(&line(r.iter().map(|s| s.as_str()).collect()));
    }
    out
}
