//! Sandwich certificates `K ⊆ L ⊆ γK + v` for Banach–Mazur upper bounds.
//!
//! The inner body is `K = s·T(P)` for a V-polytope `P`, a real scale `s`
//! (often irrational, e.g. `1/(2‖(1,1,4)‖₂)`) and an optional rational linear
//! map `T`. Outer containment in a p-ball reduces to the support function
//! `h_{B_p}(a) = ‖a‖_q` on each facet normal of `K`, so it is decided from
//! finitely many scalar inequalities; sampled boundary points and the Hölder
//! maximizers are checked on top as a cross-check.

mod parallelepiped;

pub use parallelepiped::{
    edge_triple, f_eval, f_scan, lp_parallelepiped_bound, parallelepiped_bound_with,
    parallelepiped_vertices, vertex_norm_argmax, FScan, FacetCheck,
};

use crate::coverings::BodySampler;
use crate::error::{Error, Result};
use crate::geometry::body::Body;
use crate::geometry::linalg::mat_vec;
use crate::geometry::norm::{pnorm_eval, pnorm_f64, Exponent};
use crate::geometry::polytope::{Halfspace, VPolytope};
use crate::geometry::real::{q_to_f64, Real, Q};
use crate::geometry::vector::Vector;

pub const TOLERANCE: f64 = 1e-9;
const BOUNDARY_SAMPLES: usize = 2048;

#[derive(Clone, Debug)]
pub struct SandwichCertificate {
    pub inner: VPolytope,
    pub inner_scale: Real,
    pub outer: Body,
    pub gamma: Real,
    /// Row-major `n×n`; `None` is the identity.
    pub transform: Option<Vec<Vec<Q>>>,
    /// `None` is the origin.
    pub translation: Option<Vector>,
    pub verified: bool,
    /// `min` over inner vertices of `1 − ‖x‖_L` (relative slack).
    pub inner_margin: f64,
    /// `min` over facets of `γ K + v` of the relative support-function slack.
    pub outer_margin: f64,
    /// Margin of the sampled cross-check (`1 − max gauge`).
    pub sample_margin: f64,
    /// Both containments decided without floating point.
    pub exact: bool,
    /// The point with the smallest margin.
    pub worst_witness: Vec<f64>,
}

fn le(a: &Real, b: &Real, tol: f64) -> bool {
    if a.is_exact() && b.is_exact() {
        a.cmp_real(b) != std::cmp::Ordering::Greater
    } else {
        a.to_f64() <= b.to_f64() + tol * b.to_f64().abs().max(1.0)
    }
}

fn rel_margin(a: &Real, b: &Real) -> f64 {
    // (b − a)/b, computed exactly when both sides allow it.
    match (a, b) {
        (Real::Exact(x), Real::Exact(y)) => q_to_f64(&((y - x) / y)),
        _ => {
            if a.cmp_real(b) == std::cmp::Ordering::Equal {
                0.0
            } else {
                (b.to_f64() - a.to_f64()) / b.to_f64()
            }
        }
    }
}

/// Maximizer of `a·x` over the unit ball of `l_p`, where `q` is the dual.
fn holder_point(a: &[f64], p: Exponent) -> Vec<f64> {
    let q = p.dual();
    match q {
        Exponent::Infinity => {
            // p = 1: a signed unit vector at the largest |aᵢ|.
            let (i, _) = a.iter().enumerate().fold((0, 0.0), |best, (i, v)| {
                if v.abs() > best.1 {
                    (i, v.abs())
                } else {
                    best
                }
            });
            let mut x = vec![0.0; a.len()];
            x[i] = a[i].signum();
            x
        }
        Exponent::Finite(qv) if qv == 1.0 => a
            .iter()
            .map(|v| if *v >= 0.0 { 1.0 } else { -1.0 })
            .collect(),
        Exponent::Finite(qv) => {
            let nq = pnorm_f64(a, q);
            a.iter()
                .map(|v| v.signum() * (v.abs() / nq).powf(qv - 1.0))
                .collect()
        }
    }
}

pub fn sandwich_verify(
    inner: &VPolytope,
    inner_scale: &Real,
    outer: &Body,
    gamma: &Real,
) -> Result<SandwichCertificate> {
    sandwich_verify_with(inner, inner_scale, outer, gamma, None, None)
}

pub fn sandwich_verify_with(
    inner: &VPolytope,
    inner_scale: &Real,
    outer: &Body,
    gamma: &Real,
    transform: Option<Vec<Vec<Q>>>,
    translation: Option<Vector>,
) -> Result<SandwichCertificate> {
    let n = inner.dim();
    if outer.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: outer.dim(),
        });
    }
    if inner_scale.to_f64() <= 0.0 || gamma.to_f64() <= 0.0 {
        return Err(Error::OutOfRange("scale and gamma must be positive".into()));
    }
    let p_mapped = match &transform {
        Some(t) => VPolytope::new(
            inner
                .vertices()
                .iter()
                .map(|v| Vector::new(mat_vec(t, v.coords())))
                .collect(),
        )?,
        None => inner.clone(),
    };
    p_mapped.require_full_dimensional()?;
    let v = translation.clone().unwrap_or_else(|| Vector::zeros(n));
    let mut exact = inner_scale.is_exact() && gamma.is_exact();
    let mut worst: (f64, Vec<f64>) = (f64::INFINITY, Vec::new());

    // K ⊆ L, vertex by vertex.
    let mut inner_margin = f64::INFINITY;
    let mut inner_ok = true;
    let outer_hs: Option<Vec<Halfspace>> = match outer.as_polytope() {
        Some(p) => Some(p.halfspaces()?),
        None => None,
    };
    for w in p_mapped.vertices() {
        let (lhs, rhs) = match (outer, &outer_hs) {
            (Body::PBall { p, .. }, None) => {
                let nv = pnorm_eval(w.coords(), *p);
                (inner_scale.mul(&nv), Real::one())
            }
            (_, Some(hs)) => {
                // Largest relative load a·(s w) / b over the outer facets.
                let mut best: Option<(Real, Real)> = None;
                for h in hs {
                    let val = inner_scale.mul(&Real::Exact(h.normal.dot(w)));
                    let b = Real::Exact(h.offset.clone());
                    let m = rel_margin(&val, &b);
                    if best.as_ref().is_none_or(|(bv, bb)| m < rel_margin(bv, bb)) {
                        best = Some((val, b));
                    }
                }
                best.expect("outer facets")
            }
            _ => unreachable!(),
        };
        exact &= lhs.is_exact();
        inner_ok &= le(&lhs, &rhs, TOLERANCE);
        let m = rel_margin(&lhs, &rhs);
        if m < inner_margin {
            inner_margin = m;
        }
        if m < worst.0 {
            let s = inner_scale.to_f64();
            worst = (m, w.to_f64().iter().map(|c| c * s).collect());
        }
    }

    // L ⊆ γK + v, facet by facet of K: h_L(a) − a·v ≤ γ s b.
    let facets = p_mapped.facets()?;
    let gs = gamma.mul(inner_scale);
    let mut outer_margin = f64::INFINITY;
    let mut outer_ok = true;
    for h in &facets {
        let av = Real::Exact(h.normal.dot(&v));
        let support = match outer {
            Body::PBall { p, .. } if outer_hs.is_none() => pnorm_eval(h.normal.coords(), p.dual()),
            _ => {
                let poly = outer.as_polytope().expect("polytopal outer body");
                let best = poly
                    .vertices()
                    .iter()
                    .map(|w| h.normal.dot(w))
                    .max()
                    .expect("vertices");
                Real::Exact(best)
            }
        };
        let lhs = if translation.is_some() {
            support.sub(&av)
        } else {
            support
        };
        let rhs = gs.mul(&Real::Exact(h.offset.clone()));
        exact &= lhs.is_exact() && rhs.is_exact();
        outer_ok &= le(&lhs, &rhs, TOLERANCE);
        let m = rel_margin(&lhs, &rhs);
        if m < outer_margin {
            outer_margin = m;
        }
        if m < worst.0 {
            let a = h.normal.to_f64();
            let pt = match outer {
                Body::PBall { p, .. } if outer_hs.is_none() => holder_point(&a, *p),
                _ => Vec::new(),
            };
            worst = (m, pt);
        }
    }

    // Cross-check: sampled boundary of L plus the Hölder maximizers, gauged
    // against γK + v.
    let mut points = BodySampler::new(outer)?.boundary_samples(BOUNDARY_SAMPLES, 0xb4);
    if let Body::PBall { p, .. } = outer {
        for h in &facets {
            points.push(holder_point(&h.normal.to_f64(), *p));
        }
    }
    let vf = v.to_f64();
    let gsf = gs.to_f64();
    let fac: Vec<(Vec<f64>, f64)> = facets
        .iter()
        .map(|h| (h.normal.to_f64(), q_to_f64(&h.offset)))
        .collect();
    let mut sample_margin = f64::INFINITY;
    for x in &points {
        let g = fac
            .iter()
            .map(|(a, b)| {
                a.iter()
                    .zip(x)
                    .zip(&vf)
                    .map(|((ai, xi), vi)| ai * (xi - vi))
                    .sum::<f64>()
                    / (gsf * b)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        sample_margin = sample_margin.min(1.0 - g);
    }
    let verified = inner_ok && outer_ok && sample_margin >= -TOLERANCE;
    Ok(SandwichCertificate {
        inner: inner.clone(),
        inner_scale: inner_scale.clone(),
        outer: outer.clone(),
        gamma: gamma.clone(),
        transform,
        translation,
        verified,
        inner_margin,
        outer_margin,
        sample_margin,
        exact,
        worst_witness: worst.1,
    })
}

impl SandwichCertificate {
    /// Re-runs the verification from the stored data.
    pub fn reverify(&self) -> Result<SandwichCertificate> {
        sandwich_verify_with(
            &self.inner,
            &self.inner_scale,
            &self.outer,
            &self.gamma,
            self.transform.clone(),
            self.translation.clone(),
        )
    }

    pub fn min_margin(&self) -> f64 {
        self.inner_margin
            .min(self.outer_margin)
            .min(self.sample_margin)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BmMethod {
    Parallelepiped,
    ExactFormula,
}

impl BmMethod {
    pub fn label(self) -> &'static str {
        match self {
            BmMethod::Parallelepiped => "parallelepiped",
            BmMethod::ExactFormula => "exact_formula",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BmBoundReport {
    pub p: Exponent,
    pub q: Exponent,
    pub gamma_bound: Real,
    pub method: BmMethod,
    pub certificate: SandwichCertificate,
    /// For the exact formula only the upper bound is machine-checked; the
    /// equality `d = 3^{1/p}` is a cited result.
    pub cited_equality: bool,
}

/// `3^{1/p}` exactly where possible: 1 at `p = ∞`, `√3` at `p = 2`.
pub fn cube_root_power(p: Exponent) -> Real {
    match p {
        Exponent::Infinity => Real::one(),
        e if e.is_two() => Real::sqrt_of(Q::from_integer(3.into())),
        e if e.is_one() => Real::Exact(Q::from_integer(3.into())),
        Exponent::Finite(v) => Real::Float(3f64.powf(1.0 / v)),
    }
}

/// Upper bound on `d_BM(l_p³, l_∞³)`.
pub fn bm_upper(p: Exponent) -> Result<BmBoundReport> {
    if p.is_infinite() || p.value() >= 2.0 {
        // 3^{−1/p}[−1,1]³ ⊆ B_p³ ⊆ [−1,1]³.
        let gamma = cube_root_power(p);
        let scale = Real::one().div(&gamma).expect("3^{1/p} is positive");
        let cert = sandwich_verify(
            &VPolytope::cube(3),
            &scale,
            &Body::PBall { dim: 3, p },
            &gamma,
        )?;
        return Ok(BmBoundReport {
            p,
            q: p.dual(),
            gamma_bound: gamma,
            method: BmMethod::ExactFormula,
            certificate: cert,
            cited_equality: true,
        });
    }
    let mut report = lp_parallelepiped_bound(p)?;
    let cap = Real::sqrt_of(crate::geometry::real::q(342, 100));
    if report.gamma_bound.cmp_real(&cap) == std::cmp::Ordering::Greater {
        report.gamma_bound = cap;
    }
    Ok(report)
}
