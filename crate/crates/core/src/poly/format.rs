use num_traits::{One, Signed};
use serde_json::{json, Value};

use super::{Monomial, Polynomial, VarSet};
use crate::error::{Error, Result};
use crate::exact_arith::{fmt_rational, parse_rational, Rational};

/// Output flavour for [`Polynomial::format`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatMode {
    Text,
    Latex,
    Json,
}

fn latex_name(name: &str) -> &str {
    match name {
        "xi" => "\\xi",
        "Theta" => "\\Theta",
        "Delta" => "\\Delta",
        other => other,
    }
}

fn monomial_text(vars: &VarSet, m: &Monomial) -> Vec<String> {
    vars.names()
        .iter()
        .zip(m.exps())
        .filter(|(_, &e)| e > 0)
        .map(|(n, &e)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect()
}

fn text(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let factors = monomial_text(p.vars(), m);
        if factors.is_empty() {
            out.push_str(&fmt_rational(&abs));
            continue;
        }
        // A leading "-x^k" would parse as (-x)^k, so keep the unit explicit.
        let first_has_power = m.exps().iter().find(|&&e| e > 0).is_some_and(|&e| e > 1);
        if !abs.is_one() || (idx == 0 && neg && first_has_power) {
            out.push_str(&fmt_rational(&abs));
            out.push('*');
        }
        out.push_str(&factors.join("*"));
    }
    out
}

fn latex_coeff(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", q.numer(), q.denom())
    }
}

fn latex(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let factors: Vec<String> = p
            .vars()
            .names()
            .iter()
            .zip(m.exps())
            .filter(|(_, &e)| e > 0)
            .map(|(n, &e)| {
                let n = latex_name(n);
                if e == 1 {
                    n.to_string()
                } else {
                    format!("{n}^{{{e}}}")
                }
            })
            .collect();
        if factors.is_empty() {
            out.push_str(&latex_coeff(&abs));
            continue;
        }
        if !abs.is_one() {
            out.push_str(&latex_coeff(&abs));
            out.push(' ');
        }
        out.push_str(&factors.join(" "));
    }
    out
}

pub(super) fn to_json(p: &Polynomial) -> Value {
    let terms: Vec<Value> =
        p.terms().rev().map(|(m, c)| json!({ "coeff": fmt_rational(c), "exps": m.exps() })).collect();
    json!({ "vars": p.vars().names(), "terms": terms })
}

pub(super) fn from_json(value: &Value) -> Result<Polynomial> {
    let bad = |msg: &str| Error::Malformed(format!("polynomial JSON: {msg}"));
    let names: Vec<String> = value
        .get("vars")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing \"vars\""))?
        .iter()
        .map(|v| v.as_str().map(str::to_string).ok_or_else(|| bad("variable names must be strings")))
        .collect::<Result<_>>()?;
    let vars = VarSet::new(&names)?;
    let vars = if vars == VarSet::canonical() { VarSet::canonical() } else { vars };
    let terms = value.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing \"terms\""))?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let coeff = t.get("coeff").and_then(Value::as_str).ok_or_else(|| bad("term without \"coeff\""))?;
        let exps: Vec<u32> = t
            .get("exps")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("term without \"exps\""))?
            .iter()
            .map(|e| e.as_u64().and_then(|e| u32::try_from(e).ok()).ok_or_else(|| bad("bad exponent")))
            .collect::<Result<_>>()?;
        if exps.len() != vars.len() {
            return Err(bad("exponent vector length does not match vars"));
        }
        out.push((Monomial::new(exps), parse_rational(coeff)?));
    }
    Ok(Polynomial::from_terms(&vars, out))
}

pub(super) fn format(p: &Polynomial, mode: FormatMode) -> String {
    match mode {
        FormatMode::Text => text(p),
        FormatMode::Latex => latex(p),
        FormatMode::Json => to_json(p).to_string(),
    }
}
