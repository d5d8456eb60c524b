//! Convex bodies addressed by the higher-level modules, and the JSON body
//! file format:
//!
//! ```json
//! {"norm": {"kind": "p", "p": 2},
//!  "body": {"kind": "simplex", "vertices": [["0","0","0"], ["1","0","0"], ...]}}
//! ```
//!
//! Numbers may be JSON numbers or strings such as `"3/4"`, `"inf"`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::norm::{pnorm_f64, Exponent, GaugeBody, Norm};
use super::polytope::{Simplex, VPolytope};
use super::real::{parse_q, Q};
use super::vector::{Vector, MAX_DIM, MIN_DIM};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Body {
    Simplex(Simplex),
    Polytope(VPolytope),
    /// `[−1, 1]ⁿ`.
    Cube {
        dim: usize,
    },
    /// Unit ball of `l_pⁿ`.
    PBall {
        dim: usize,
        p: Exponent,
    },
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::Simplex(s) => s.dim(),
            Body::Polytope(p) => p.dim(),
            Body::Cube { dim } | Body::PBall { dim, .. } => *dim,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Body::Simplex(_) => "simplex",
            Body::Polytope(_) => "vpolytope",
            Body::Cube { .. } => "cube",
            Body::PBall { .. } => "pball",
        }
    }

    /// The body as a V-polytope, when it is one (`l₁`/`l∞` balls included).
    pub fn as_polytope(&self) -> Option<VPolytope> {
        match self {
            Body::Simplex(s) => Some(s.to_polytope()),
            Body::Polytope(p) => Some(p.clone()),
            Body::Cube { dim } => Some(VPolytope::cube(*dim)),
            Body::PBall { dim, p } if p.is_infinite() => Some(VPolytope::cube(*dim)),
            Body::PBall { dim, p } if p.is_one() => Some(VPolytope::cross_polytope(*dim)),
            Body::PBall { .. } => None,
        }
    }

    /// Float membership with absolute slack `tol`.
    pub fn contains_f64(&self, x: &[f64], tol: f64) -> Result<bool> {
        match self {
            Body::Cube { .. } => Ok(x.iter().all(|c| c.abs() <= 1.0 + tol)),
            Body::PBall { p, .. } => Ok(pnorm_f64(x, *p) <= 1.0 + tol),
            _ => {
                let poly = self.as_polytope().expect("polytopal body");
                let hs = poly.halfspaces()?;
                Ok(hs.iter().all(|h| {
                    let a = h.normal.to_f64();
                    let b = super::real::q_to_f64(&h.offset);
                    let scale = a.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
                    a.iter().zip(x).map(|(u, v)| u * v).sum::<f64>() <= b + tol * scale
                }))
            }
        }
    }
}

pub fn check_dim(dim: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

/// A parsed body file.
#[derive(Clone, Debug)]
pub struct BodyFile {
    pub norm: Option<Norm>,
    pub body: Body,
}

#[derive(Deserialize, Serialize)]
struct RawFile {
    #[serde(default)]
    norm: Option<Value>,
    body: Value,
}

pub fn parse_scalar(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => {
            parse_q(s).ok_or_else(|| Error::Parse(format!("not a rational: {s:?}")))
        }
        Value::Number(n) => {
            parse_q(&n.to_string()).ok_or_else(|| Error::Parse(format!("not a rational: {n}")))
        }
        other => Err(Error::Parse(format!("expected a number, found {other}"))),
    }
}

pub fn parse_exponent(v: &Value) -> Result<Exponent> {
    match v {
        Value::String(s) => Exponent::parse(s),
        Value::Number(n) => Exponent::new(
            n.as_f64()
                .ok_or_else(|| Error::Parse(format!("bad exponent {n}")))?,
        ),
        other => Err(Error::Parse(format!("expected an exponent, found {other}"))),
    }
}

pub fn parse_points(v: &Value) -> Result<Vec<Vector>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected an array of points".into()))?;
    let pts = arr
        .iter()
        .map(|p| {
            let coords = p
                .as_array()
                .ok_or_else(|| Error::Parse("a point must be an array of coordinates".into()))?;
            Ok(Vector::new(
                coords
                    .iter()
                    .map(parse_scalar)
                    .collect::<Result<Vec<_>>>()?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let first = pts.first().ok_or(Error::Empty)?;
    check_dim(first.dim())?;
    for p in &pts {
        if p.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: p.dim(),
            });
        }
    }
    Ok(pts)
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name)
        .ok_or_else(|| Error::Parse(format!("missing field {name:?}")))
}

fn kind(v: &Value) -> Result<&str> {
    field(v, "kind")?
        .as_str()
        .ok_or_else(|| Error::Parse("\"kind\" must be a string".into()))
}

pub fn parse_norm(v: &Value) -> Result<Norm> {
    match kind(v)? {
        "p" => Ok(Norm::P(parse_exponent(field(v, "p")?)?)),
        "gauge" => Ok(Norm::Gauge(Arc::new(GaugeBody::from_vertices(
            parse_points(field(v, "vertices")?)?,
        )?))),
        k => Err(Error::Parse(format!("unknown norm kind {k:?}"))),
    }
}

fn parse_dim(v: &Value) -> Result<usize> {
    let d = field(v, "dim")?
        .as_u64()
        .ok_or_else(|| Error::Parse("\"dim\" must be a positive integer".into()))?
        as usize;
    check_dim(d)?;
    Ok(d)
}

pub fn parse_body(v: &Value) -> Result<Body> {
    match kind(v)? {
        "simplex" => Ok(Body::Simplex(Simplex::new(parse_points(field(
            v, "vertices",
        )?)?)?)),
        "vpolytope" => Ok(Body::Polytope(VPolytope::new(parse_points(field(
            v, "vertices",
        )?)?)?)),
        "cube" => Ok(Body::Cube { dim: parse_dim(v)? }),
        "pball" => Ok(Body::PBall {
            dim: parse_dim(v)?,
            p: parse_exponent(field(v, "p")?)?,
        }),
        k => Err(Error::Parse(format!("unknown body kind {k:?}"))),
    }
}

pub fn parse_body_file(text: &str) -> Result<BodyFile> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let norm = raw.norm.as_ref().map(parse_norm).transpose()?;
    let body = parse_body(&raw.body)?;
    if let Some(n) = &norm {
        n.check_dim(body.dim())?;
    }
    Ok(BodyFile { norm, body })
}
