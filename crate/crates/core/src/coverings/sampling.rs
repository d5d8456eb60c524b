//! Deterministic point sets on and inside bodies: Halton directions mixed
//! with ChaCha pseudo-random ones, pushed to the boundary along rays from an
//! interior center.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::body::Body;
use crate::geometry::norm::pnorm_f64;
use crate::geometry::polytope::Halfspace;
use crate::geometry::real::{q_from_f64, q_to_f64, Q};
use crate::geometry::vector::Vector;
use num_traits::Signed;

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Radical inverse of `index` in `base`.
pub fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

/// Rationals on a `2⁻²⁰` grid, so exact follow-up arithmetic stays small.
fn dyadic(x: f64) -> Q {
    q_from_f64((x * 1048576.0).round() / 1048576.0).expect("finite sample")
}

pub struct BodySampler {
    body: Body,
    dim: usize,
    center: Vec<f64>,
    /// Outer description for polytopal bodies.
    halfspaces: Option<Vec<Halfspace>>,
}

impl BodySampler {
    pub fn new(body: &Body) -> Result<Self> {
        let dim = body.dim();
        let (center, halfspaces) = match body.as_polytope() {
            Some(p) => (p.centroid().to_f64(), Some(p.halfspaces()?)),
            None => (vec![0.0; dim], None),
        };
        Ok(BodySampler {
            body: body.clone(),
            dim,
            center,
            halfspaces,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_polytopal(&self) -> bool {
        self.halfspaces.is_some()
    }

    /// Largest `t` with `center + t·u` in the body.
    fn exit(&self, u: &[f64]) -> f64 {
        match (&self.halfspaces, &self.body) {
            (Some(hs), _) => hs
                .iter()
                .filter_map(|h| {
                    let a = h.normal.to_f64();
                    let au: f64 = a.iter().zip(u).map(|(x, y)| x * y).sum();
                    (au > 0.0).then(|| {
                        let ac: f64 = a.iter().zip(&self.center).map(|(x, y)| x * y).sum();
                        (q_to_f64(&h.offset) - ac) / au
                    })
                })
                .fold(f64::INFINITY, f64::min),
            (None, Body::PBall { p, .. }) => 1.0 / pnorm_f64(u, *p),
            (None, _) => unreachable!("non-polytopal bodies are p-balls"),
        }
    }

    /// Halton direction in `[−1, 1]ⁿ`; index 0 is skipped.
    fn direction(&self, i: u64) -> Vec<f64> {
        (0..self.dim)
            .map(|k| 2.0 * halton(i + 1, PRIMES[k]) - 1.0)
            .collect()
    }

    fn random_direction(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        loop {
            let u: Vec<f64> = (0..self.dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            if u.iter().any(|x| x.abs() > 1e-12) {
                return u;
            }
        }
    }

    fn along(&self, u: &[f64], s: f64) -> Vec<f64> {
        let t = self.exit(u) * s;
        self.center.iter().zip(u).map(|(c, x)| c + t * x).collect()
    }

    /// Points on the boundary: half Halton directions, half random.
    pub fn boundary_samples(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let halton_count = count / 2;
        let mut out: Vec<Vec<f64>> = (0..halton_count as u64)
            .map(|i| self.along(&self.direction(i), 1.0))
            .collect();
        while out.len() < count {
            let u = self.random_direction(&mut rng);
            out.push(self.along(&u, 1.0));
        }
        out
    }

    /// Interior points `center + s·t(u)·u` with `s = v^{1/n}`.
    pub fn interior_samples(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        let n = self.dim as f64;
        (0..count)
            .map(|i| {
                let u = if i % 2 == 0 {
                    self.direction(i as u64 + 7919)
                } else {
                    self.random_direction(&mut rng)
                };
                let s: f64 = rng.gen::<f64>().powf(1.0 / n);
                self.along(&u, s)
            })
            .collect()
    }

    /// A quarter boundary, the rest interior.
    pub fn mixed_samples(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut out = self.boundary_samples(count / 4, seed);
        out.extend(self.interior_samples(count - count / 4, seed));
        out
    }

    /// Vertices of polytopal bodies; `±eᵢ` and the scaled sign vectors for balls.
    pub fn extreme_points(&self) -> Vec<Vec<f64>> {
        if let Some(p) = self.body.as_polytope() {
            return p.vertices().iter().map(Vector::to_f64).collect();
        }
        let mut out = Vec::new();
        for i in 0..self.dim {
            for s in [-1.0, 1.0] {
                let mut e = vec![0.0; self.dim];
                e[i] = s;
                out.push(e);
            }
        }
        for mask in 0..1u32 << self.dim {
            let u: Vec<f64> = (0..self.dim)
                .map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 })
                .collect();
            out.push(self.along(&u, 1.0));
        }
        out
    }

    /// Exact rational version of a float sample for polytopal bodies: the
    /// displacement from the centroid is rounded to a dyadic grid, then
    /// pushed to the boundary in rational arithmetic when `on_boundary`.
    pub fn exact_point(&self, x: &[f64], on_boundary: bool) -> Result<Vector> {
        let hs = self
            .halfspaces
            .as_ref()
            .ok_or_else(|| Error::Unsupported("exact samples of a non-polytopal body".into()))?;
        let center = self.body.as_polytope().expect("polytopal body").centroid();
        let u = Vector::new(
            x.iter()
                .zip(&self.center)
                .map(|(a, c)| dyadic(a - c))
                .collect(),
        );
        if u.is_zero() {
            return Ok(center);
        }
        let mut t: Option<Q> = None;
        for h in hs {
            let au = h.normal.dot(&u);
            if au.is_positive() {
                let cand = (&h.offset - h.normal.dot(&center)) / au;
                if t.as_ref().is_none_or(|t| cand < *t) {
                    t = Some(cand);
                }
            }
        }
        let t = t.ok_or(Error::Degenerate("unbounded body".into()))?;
        // Interior samples keep their (rounded) displacement unless rounding
        // pushed them outside.
        let one = Q::from_integer(1.into());
        let t = if on_boundary || t < one { t } else { one };
        Ok(center.add(&u.scale(&t)))
    }
}

/// Boundary point of `body` in direction `u` from its center.
pub fn boundary_point(body: &Body, u: &[f64]) -> Result<Vec<f64>> {
    Ok(BodySampler::new(body)?.along(u, 1.0))
}

pub fn interior_samples(body: &Body, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    Ok(BodySampler::new(body)?.interior_samples(count, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::norm::Exponent;

    #[test]
    fn halton_values() {
        assert_eq!(halton(1, 2), 0.5);
        assert_eq!(halton(3, 2), 0.75);
        assert!((halton(5, 3) - 7.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn boundary_points_are_on_the_boundary() {
        let ball = Body::PBall {
            dim: 3,
            p: Exponent::ONE,
        };
        let s = BodySampler::new(&ball).unwrap();
        for x in s.boundary_samples(64, 1) {
            assert!((x.iter().map(|v| v.abs()).sum::<f64>() - 1.0).abs() < 1e-12);
        }
        for x in s.interior_samples(64, 1) {
            assert!(x.iter().map(|v| v.abs()).sum::<f64>() <= 1.0 + 1e-12);
        }
        let disk = Body::PBall {
            dim: 2,
            p: Exponent::TWO,
        };
        let s = BodySampler::new(&disk).unwrap();
        for x in s.boundary_samples(64, 2) {
            assert!((x[0].hypot(x[1]) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_boundary_samples() {
        let ball = Body::PBall {
            dim: 3,
            p: Exponent::ONE,
        };
        let s = BodySampler::new(&ball).unwrap();
        for x in s.boundary_samples(32, 3) {
            let e = s.exact_point(&x, true).unwrap();
            let l1: Q = e.iter().map(|c| c.abs()).sum();
            assert_eq!(l1, crate::geometry::real::qi(1));
        }
    }
}
