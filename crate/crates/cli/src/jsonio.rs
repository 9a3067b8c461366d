//! JSON encoding of systems, classifications and certificates.
//!
//! Exact rationals serialize as `"p/q"` strings so no value is mangled
//! through floats; genuinely numeric quantities are JSON numbers.

use serde_json::{json, Value};

use opf_core::classify::{Coord, CritReport, Evidence};
use opf_core::compactify::InfinityReport;
use opf_core::exactpoly::{rat_string, Rat};
use opf_core::vfield::{Provenance, QuadSystem};

use crate::polyparse::parse_bipoly;

pub fn rat_json(r: &Rat) -> Value {
    Value::String(rat_string(r))
}

fn opt_rat(r: &Option<Rat>) -> Value {
    match r {
        Some(r) => rat_json(r),
        None => Value::Null,
    }
}

pub fn provenance_json(p: &Provenance) -> Value {
    json!({
        "family": p.family.map(|f| f.name()),
        "shape": p.shape,
        "n": p.n,
        "mu": opt_rat(&p.mu),
        "a": opt_rat(&p.a),
        "b": opt_rat(&p.b),
        "lambda": opt_rat(&p.lambda),
        "alpha": opt_rat(&p.alpha),
        "beta": opt_rat(&p.beta),
    })
}

pub fn system_json(sys: &QuadSystem) -> Value {
    json!({
        "P": sys.p.to_string(),
        "Q": sys.q.to_string(),
        "degree": sys.degree(),
        "provenance": sys.provenance.as_ref().map(provenance_json).unwrap_or(Value::Null),
    })
}

/// Parses the `system` subcommand's output (P and Q as polynomial strings).
pub fn system_from_json(value: &Value) -> Result<QuadSystem, String> {
    let p = value
        .get("P")
        .and_then(Value::as_str)
        .ok_or_else(|| String::from("missing \"P\" field"))?;
    let q = value
        .get("Q")
        .and_then(Value::as_str)
        .ok_or_else(|| String::from("missing \"Q\" field"))?;
    let p = parse_bipoly(p).map_err(|e| e.to_string())?;
    let q = parse_bipoly(q).map_err(|e| e.to_string())?;
    Ok(QuadSystem::new(p, q))
}

fn coord_json(c: &Coord) -> Value {
    match c {
        Coord::Exact(s) => Value::String(format!("{s}")),
        Coord::Approx(f) => json!(f),
    }
}

fn evidence_json(e: &Evidence) -> Value {
    match e {
        Evidence::Eigenvalues { l1, l2, exact } => json!({
            "type": "eigenvalues",
            "l1": [l1.0, l1.1],
            "l2": [l2.0, l2.1],
            "exact": exact,
        }),
        Evidence::SemiHyperbolic { m, a_m, lambda } => json!({
            "type": "semi-hyperbolic",
            "m": m,
            "a_m": rat_string(a_m),
            "lambda": rat_string(lambda),
        }),
        Evidence::Nilpotent { m, a, n, b } => json!({
            "type": "nilpotent",
            "m": m,
            "a": a.as_ref().map(rat_string),
            "n": n,
            "b": b.as_ref().map(rat_string),
        }),
        Evidence::LinearPartZero => json!({ "type": "linear-part-zero" }),
    }
}

pub fn crit_report_json(report: &CritReport) -> Value {
    json!({
        "location": { "v": coord_json(&report.point.v), "x": coord_json(&report.point.x) },
        "exact": report.point.v.is_exact() && report.point.x.is_exact(),
        "chart": report.point.chart.name(),
        "kind": report.classification.kind.name(),
        "stability": report.classification.stability.map(|s| match s {
            opf_core::classify::Stability::Stable => "stable",
            opf_core::classify::Stability::Unstable => "unstable",
        }),
        "evidence": evidence_json(&report.classification.evidence),
    })
}

pub fn infinity_report_json(report: &InfinityReport) -> Value {
    let mut value = crit_report_json(&report.report);
    let obj = value.as_object_mut().unwrap();
    obj.insert("direction".into(), json!([report.direction.0, report.direction.1]));
    obj.insert("antipode_chart".into(), json!(report.antipode_chart.name()));
    value
}
