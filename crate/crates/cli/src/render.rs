//! Text and JSON renderings. Exact numbers always go out as strings.

use std::fmt::Display;

use maass_core::vector::VectorValuedSeries;
use maass_core::{Coefficient, Polynomial, PuiseuxSeries, Rational};
use serde_json::{json, Value};

pub fn series_json<C: Coefficient + Display>(s: &PuiseuxSeries<C>) -> Value {
    json!({
        "terms": s.terms().map(|(e, c)| json!([e.to_string(), c.to_string()])).collect::<Vec<_>>(),
        "trunc": s.trunc().map(|t| t.to_string()),
    })
}

pub fn vector_json<C: Coefficient + Display>(v: &VectorValuedSeries<C>) -> Value {
    json!({
        "weight": v.weight().to_string(),
        "parity": format!("{:?}", v.parity()).to_lowercase(),
        "components": v.components().iter().map(series_json).collect::<Vec<_>>(),
    })
}

pub fn vector_text<C: Coefficient + Display>(v: &VectorValuedSeries<C>) -> String {
    let mut out = String::new();
    for (mu, c) in v.components().iter().enumerate() {
        out.push_str(&format!("# component {mu}\n"));
        out.push_str(&c.dump());
    }
    out
}

/// Coefficients lowest degree first.
pub fn poly_json(p: &Polynomial<Rational>) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(c.to_string())).collect())
}
