use std::ops::{Deref, Index};

use num_traits::Zero;

use super::real::{q_to_f64, qi, Q};

/// Smallest and largest ambient dimension the library accepts.
pub const MIN_DIM: usize = 1;
pub const MAX_DIM: usize = 8;

/// A point of ℝⁿ with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(Vec<Q>);

impl Vector {
    pub fn new(coords: Vec<Q>) -> Self {
        Vector(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| qi(c)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Q::zero(); dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[axis] = qi(1);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Q> {
        self.0
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Q) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }

    pub fn dot(&self, other: &Vector) -> Q {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(q_to_f64).collect()
    }

    /// Affine combination `Σ wᵢ pᵢ` (weights are not required to sum to 1).
    pub fn combination(points: &[Vector], weights: &[Q]) -> Vector {
        let dim = points[0].dim();
        let mut out = vec![Q::zero(); dim];
        for (p, w) in points.iter().zip(weights) {
            if w.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(&p.0) {
                *o += c * w;
            }
        }
        Vector(out)
    }

    pub fn centroid(points: &[Vector]) -> Vector {
        let w = Q::new(1.into(), (points.len() as i64).into());
        Self::combination(points, &vec![w; points.len()])
    }
}

impl Deref for Vector {
    type Target = [Q];
    fn deref(&self) -> &[Q] {
        &self.0
    }
}

impl Index<usize> for Vector {
    type Output = Q;
    fn index(&self, i: usize) -> &Q {
        &self.0[i]
    }
}

impl From<Vec<Q>> for Vector {
    fn from(v: Vec<Q>) -> Self {
        Vector(v)
    }
}
