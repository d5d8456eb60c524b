use std::time::Duration;

use diampart::bounds::Evidence;
use diampart::coverings::{CoverageReport, Witness, WitnessPoint};
use diampart::geometry::real::{format_f64, format_q, Real, Q};
use diampart::geometry::vector::Vector;
use serde_json::{json, Map, Value};

/// The payload of one command before it is wrapped in the envelope.
pub struct Outcome {
    pub inputs: Value,
    pub results: Value,
    pub evidence: Evidence,
    /// Every verification in the run passed.
    pub verified: bool,
}

pub fn envelope(command: &str, outcome: &Outcome, elapsed: Option<Duration>) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("inputs".into(), outcome.inputs.clone());
    m.insert("results".into(), outcome.results.clone());
    m.insert("evidence_level".into(), json!(outcome.evidence.label()));
    m.insert("verified".into(), json!(outcome.verified));
    if let Some(t) = elapsed {
        m.insert(
            "timings".into(),
            json!({ "elapsed_ms": format_f64(t.as_secs_f64() * 1e3) }),
        );
    }
    Value::Object(m)
}

pub fn real(r: &Real) -> Value {
    json!({
        "value": r.render(),
        "approx": format_f64(r.to_f64()),
        "exact": r.is_exact(),
    })
}

pub fn rational(x: &Q) -> Value {
    json!(format_q(x))
}

pub fn point(v: &Vector) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

pub fn float_point(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|x| json!(format_f64(*x))).collect())
}

pub fn witness(w: &Witness) -> Value {
    let point = match &w.point {
        WitnessPoint::Exact(v) => point(v),
        WitnessPoint::Float(v) => float_point(v),
    };
    json!({ "point": point, "margin": format_f64(w.margin) })
}

pub fn coverage(c: &CoverageReport) -> Value {
    json!({
        "mode": c.mode.label(),
        "resolution": c.resolution,
        "points_tested": c.points_tested,
        "covered": c.covered,
        "evidence_level": c.evidence_level(),
        "worst_witness": witness(&c.worst_witness),
        "tolerance": real(&c.tolerance),
    })
}

pub fn coverage_evidence(c: &CoverageReport) -> Evidence {
    match c.evidence_level() {
        "grid-certified" => Evidence::GridCertified,
        _ => Evidence::Sampled,
    }
}
