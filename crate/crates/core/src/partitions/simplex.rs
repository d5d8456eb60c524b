//! Simplex schemes. Writing `x = Σλᵢvᵢ`, either some `λᵢ ≥ t` — then `x` lies
//! in the vertex homothet `t·vᵢ + (1−t)S` — or every `λᵢ ≤ t`, and `x` lies in
//! the residual `T₅`, which sits inside the reflected copy
//! `−((n+1)t − 1)(S − g) + g` about the centroid `g`. The residual is then
//! either kept whole or subdivided again inside the reflected copy.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::{BarycentricRegion, PartitionCertificate, PartitionPiece, Region, Scheme};
use crate::error::{Error, Result};
use crate::geometry::body::Body;
use crate::geometry::polytope::{capped_simplex_patterns, Homothet, Simplex};
use crate::geometry::real::{format_q, q, qi, Real, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SimplexScheme {
    M5,
    M8,
    M9,
}

impl SimplexScheme {
    pub fn from_pieces(m: usize) -> Result<Self> {
        match m {
            5 => Ok(SimplexScheme::M5),
            8 => Ok(SimplexScheme::M8),
            9 => Ok(SimplexScheme::M9),
            _ => Err(Error::Unsupported(format!(
                "no simplex scheme with {m} pieces (available: 5, 8, 9)"
            ))),
        }
    }

    pub fn pieces(self) -> usize {
        match self {
            SimplexScheme::M5 => 5,
            SimplexScheme::M8 => 8,
            SimplexScheme::M9 => 9,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SimplexScheme::M5 => "m5",
            SimplexScheme::M8 => "m8",
            SimplexScheme::M9 => "m9",
        }
    }

    /// Barycentric threshold `t` of the vertex homothets.
    pub fn vertex_cap(self) -> Q {
        match self {
            SimplexScheme::M5 => q(2, 5),
            SimplexScheme::M8 => q(7, 16),
            SimplexScheme::M9 => q(8, 17),
        }
    }

    pub fn ratio(self) -> Q {
        match self {
            SimplexScheme::M5 => q(3, 5),
            SimplexScheme::M8 => q(9, 16),
            SimplexScheme::M9 => q(9, 17),
        }
    }
}

/// The homothets `(1−μ)vᵢ + μS`. Every point has some `λᵢ ≥ 1/(n+1)`, so
/// they cover `S` exactly when `μ ≥ n/(n+1)`.
pub fn simplex_vertex_homothets(s: &Simplex, mu: &Q) -> Result<Vec<Homothet>> {
    let n = s.dim() as i64;
    let least = q(n, n + 1);
    if *mu < least || *mu > Q::one() {
        return Err(Error::OutOfRange(format!(
            "mu = {} outside [{}, 1]: the centroid (all barycentric coordinates 1/{}) \
             is uncovered",
            format_q(mu),
            format_q(&least),
            n + 1
        )));
    }
    let base = Arc::new(s.to_polytope());
    let frame = Homothet::identity(base);
    Ok(vertex_homothets_in(&frame, s, mu))
}

/// Vertex homothets of a frame simplex `R = frame(S)`, as homothets of `S`.
fn vertex_homothets_in(frame: &Homothet, r: &Simplex, mu: &Q) -> Vec<Homothet> {
    let one_minus = Q::one() - mu;
    r.vertices()
        .iter()
        .map(|v| frame.then(mu, &v.scale(&one_minus)))
        .collect()
}

pub fn residual_region(s: &Simplex, t: &Q) -> BarycentricRegion {
    let parts = s.dim() + 1;
    BarycentricRegion {
        frame: s.clone(),
        lower: vec![Q::zero(); parts],
        upper: vec![t.clone(); parts],
    }
}

/// The homothet `−((n+1)t − 1)(S − g) + g` containing `{λ ∈ [0, t]ⁿ⁺¹}`,
/// checked on every vertex of the residual.
pub fn residual_enclosure(s: &Simplex, t: &Q) -> Result<Homothet> {
    let parts = (s.dim() + 1) as i64;
    if *t <= q(1, parts) || *t > q(2, parts) {
        return Err(Error::OutOfRange(format!(
            "residual cap t = {} outside (1/{parts}, 2/{parts}]",
            format_q(t)
        )));
    }
    let k = qi(parts) * t - Q::one();
    let h = s.homothet_about_centroid(&-k.clone());
    let inv = Q::one() / &h.ratio;
    for lambdas in capped_simplex_patterns(s.dim() + 1, t) {
        let x = s.from_barycentric(&lambdas);
        let pre = x.sub(&h.translation).scale(&inv);
        if !s.contains(&pre)? {
            return Err(Error::Degenerate(format!(
                "residual vertex {lambdas:?} escapes the enclosure of ratio -{}",
                format_q(&k)
            )));
        }
    }
    Ok(h)
}

fn frame_simplex(frame: &Homothet, s: &Simplex) -> Simplex {
    Simplex::new(s.vertices().iter().map(|v| frame.map_point(v)).collect())
        .expect("homothets of a simplex are simplices")
}

/// Pieces of `scheme` applied to `frame(S)`, each intersected with `clip`.
fn scheme_pieces(
    s: &Simplex,
    frame: &Homothet,
    scheme: SimplexScheme,
    clip: &[Region],
) -> Result<Vec<PartitionPiece>> {
    let r = frame_simplex(frame, s);
    let t = scheme.vertex_cap();
    let mut pieces = Vec::with_capacity(scheme.pieces());
    for h in vertex_homothets_in(frame, &r, &(Q::one() - &t)) {
        let mut regions = clip.to_vec();
        regions.push(Region::Homothet(h.clone()));
        pieces.push(PartitionPiece::new(regions, Some(h))?);
    }
    let local = residual_enclosure(&r, &t)?;
    // Enclosure of the residual as a homothet of the original simplex.
    let enclosure = frame.then(&local.ratio, &local.translation);
    let mut inner_clip = clip.to_vec();
    inner_clip.push(Region::Barycentric(residual_region(&r, &t)));
    match scheme {
        SimplexScheme::M5 => {
            pieces.push(PartitionPiece::new(inner_clip, Some(enclosure))?);
        }
        SimplexScheme::M8 => {
            let reflected = frame_simplex(&enclosure, s);
            let n = s.dim() as i64;
            for h in vertex_homothets_in(&enclosure, &reflected, &q(n, n + 1)) {
                let mut regions = inner_clip.clone();
                regions.push(Region::Homothet(h.clone()));
                pieces.push(PartitionPiece::new(regions, Some(h))?);
            }
        }
        SimplexScheme::M9 => {
            pieces.extend(scheme_pieces(
                s,
                &enclosure,
                SimplexScheme::M5,
                &inner_clip,
            )?);
        }
    }
    Ok(pieces)
}

fn certify(
    scheme: Scheme,
    parent: Body,
    pieces: Vec<PartitionPiece>,
    expected: Q,
) -> Result<PartitionCertificate> {
    let mut cert = PartitionCertificate {
        scheme,
        parent,
        pieces,
        ratio: Real::Exact(expected.clone()),
        norm: None,
        coverage_evidence: None,
    };
    let attained = cert
        .enclosure_ratio()
        .ok_or_else(|| Error::Degenerate("piece without enclosure".into()))?;
    if attained != expected {
        return Err(Error::Degenerate(format!(
            "scheme enclosures give ratio {}, expected {}",
            format_q(&attained),
            format_q(&expected)
        )));
    }
    cert.ratio = Real::Exact(attained);
    Ok(cert)
}

pub fn simplex_partition(s: &Simplex, scheme: SimplexScheme) -> Result<PartitionCertificate> {
    if s.dim() != 3 {
        return Err(Error::UnsupportedDimension(s.dim()));
    }
    let frame = Homothet::identity(Arc::new(s.to_polytope()));
    let pieces = scheme_pieces(s, &frame, scheme, &[])?;
    debug_assert_eq!(pieces.len(), scheme.pieces());
    certify(
        Scheme::Simplex(scheme),
        Body::Simplex(s.clone()),
        pieces,
        scheme.ratio(),
    )
}

/// Three corner triangles `½vᵢ + ½T` and the middle triangle `−½(T − g) + g`.
pub fn triangle_partition4(t: &Simplex) -> Result<PartitionCertificate> {
    if t.dim() != 2 {
        return Err(Error::UnsupportedDimension(t.dim()));
    }
    let half = q(1, 2);
    let mut pieces = Vec::with_capacity(4);
    for h in simplex_vertex_homothets_unchecked(t, &half) {
        pieces.push(PartitionPiece::new(
            vec![Region::Homothet(h.clone())],
            Some(h),
        )?);
    }
    let middle = residual_enclosure(t, &half)?;
    pieces.push(PartitionPiece::new(
        vec![Region::Homothet(middle.clone())],
        Some(middle),
    )?);
    certify(Scheme::Triangle, Body::Simplex(t.clone()), pieces, half)
}

fn simplex_vertex_homothets_unchecked(s: &Simplex, mu: &Q) -> Vec<Homothet> {
    let frame = Homothet::identity(Arc::new(s.to_polytope()));
    vertex_homothets_in(&frame, s, mu)
}
