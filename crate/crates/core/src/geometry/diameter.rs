//! Diameters of finite point sets and V-polytopes.
//!
//! The diameter of a convex hull equals the diameter of its vertex set, so
//! everything reduces to finite sets. Polyhedral norms use support-function
//! identities instead of pairwise evaluation:
//! `diam = max over dual directions a of (max a·x − min a·x)`.

use itertools::Itertools;
use num_traits::{Signed, Zero};

use super::norm::{Exponent, Norm};
use super::polytope::VPolytope;
use super::real::{Real, Q};
use super::vector::Vector;
use crate::error::{Error, Result};

fn check(points: &[Vector], norm: &Norm) -> Result<usize> {
    let first = points.first().ok_or(Error::Empty)?;
    let dim = first.dim();
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
    }
    norm.check_dim(dim)?;
    Ok(dim)
}

fn width_along(points: &[Vector], a: &[Q]) -> Q {
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for p in points {
        let s = p.iter().zip(a).fold(Q::zero(), |acc, (x, y)| acc + x * y);
        if lo.as_ref().is_none_or(|l| s < *l) {
            lo = Some(s.clone());
        }
        if hi.as_ref().is_none_or(|h| s > *h) {
            hi = Some(s);
        }
    }
    hi.unwrap() - lo.unwrap()
}

/// Largest pairwise distance `max ‖x − y‖`; 0 for a single point.
pub fn diameter_finite(points: &[Vector], norm: &Norm) -> Result<Real> {
    let dim = check(points, norm)?;
    if points.len() == 1 {
        return Ok(Real::zero());
    }
    match norm {
        Norm::P(Exponent::Infinity) => Ok(Real::Exact(
            (0..dim)
                .map(|i| {
                    let lo = points.iter().map(|p| &p[i]).min().unwrap();
                    let hi = points.iter().map(|p| &p[i]).max().unwrap();
                    hi - lo
                })
                .max()
                .unwrap(),
        )),
        Norm::P(p) if p.is_one() && (1usize << (dim - 1)) < points.len() / 2 => {
            // ‖x‖₁ = max over sign vectors s of s·x; fix s₀ = +1.
            let best = (0..1usize << (dim - 1))
                .map(|mask| {
                    let s: Vec<Q> = (0..dim)
                        .map(|i| {
                            if i > 0 && (mask >> (i - 1)) & 1 == 1 {
                                Q::from_integer((-1).into())
                            } else {
                                Q::from_integer(1.into())
                            }
                        })
                        .collect();
                    width_along(points, &s)
                })
                .max()
                .unwrap();
            Ok(Real::Exact(best))
        }
        Norm::P(p) if p.is_two() => {
            let best = points
                .iter()
                .tuple_combinations()
                .map(|(x, y)| {
                    x.iter()
                        .zip(y.iter())
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<Q>()
                })
                .max()
                .unwrap();
            Ok(Real::sqrt_of(best))
        }
        Norm::P(p) if !p.is_one() => {
            let pts: Vec<Vec<f64>> = points.iter().map(|v| v.to_f64()).collect();
            Ok(Real::Float(diameter_f64(&pts, norm)))
        }
        Norm::Gauge(g) => Ok(Real::Exact(
            g.facet_normals()
                .iter()
                .map(|a| width_along(points, a))
                .max()
                .unwrap_or_else(Q::zero),
        )),
        _ => diameter_pairwise(points, norm),
    }
}

/// Brute force over all pairs with [`Norm::eval`]; the reference the fast
/// paths are tested against.
pub fn diameter_pairwise(points: &[Vector], norm: &Norm) -> Result<Real> {
    check(points, norm)?;
    let mut best = Real::zero();
    for (x, y) in points.iter().tuple_combinations() {
        best = best.max(norm.eval(&x.sub(y))?);
    }
    Ok(best)
}

pub fn diameter_f64(points: &[Vec<f64>], norm: &Norm) -> f64 {
    let mut best = 0.0f64;
    let mut diff = vec![0.0; points.first().map_or(0, |p| p.len())];
    for (i, x) in points.iter().enumerate() {
        for y in &points[i + 1..] {
            for (d, (a, b)) in diff.iter_mut().zip(x.iter().zip(y)) {
                *d = a - b;
            }
            best = best.max(norm.eval_f64(&diff));
        }
    }
    best
}

pub fn polytope_diameter(p: &VPolytope, norm: &Norm) -> Result<Real> {
    diameter_finite(p.vertices(), norm)
}

/// `|ratio| · diam(base)`, exact when the base diameter is exact.
pub fn scaled_diameter(ratio: &Q, base_diameter: &Real) -> Real {
    Real::Exact(ratio.abs()).mul(base_diameter)
}
