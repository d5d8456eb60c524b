//! Exact `β_X(A, m)` for small finite `A`.
//!
//! A partition into `m` parts of diameter at most `δ` is an `m`-coloring of
//! the graph joining pairs at distance `> δ`. Feasibility is monotone in `δ`
//! and only changes at pairwise distances, so a binary search over the
//! sorted distances finds the least feasible threshold.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::norm::Norm;
use crate::geometry::real::Real;
use crate::geometry::vector::Vector;

pub const MAX_POINTS: usize = 14;
pub const MAX_PARTS: usize = 9;

#[derive(Clone, Debug)]
pub struct DistanceGraph {
    pub threshold: Real,
    pub adjacency: Vec<Vec<bool>>,
}

impl DistanceGraph {
    /// Edges between points at distance strictly greater than `threshold`.
    pub fn new(points: &[Vector], norm: &Norm, threshold: Real) -> Result<Self> {
        let dist = distances(points, norm)?;
        Ok(Self::from_distances(&dist, threshold))
    }

    fn from_distances(dist: &[Vec<Real>], threshold: Real) -> Self {
        let adjacency = dist
            .iter()
            .map(|row| {
                row.iter()
                    .map(|d| d.cmp_real(&threshold) == Ordering::Greater)
                    .collect()
            })
            .collect();
        DistanceGraph {
            threshold,
            adjacency,
        }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.adjacency[i][j])
            .collect()
    }

    pub fn is_proper(&self, coloring: &[usize]) -> bool {
        self.edges()
            .iter()
            .all(|&(i, j)| coloring[i] != coloring[j])
    }
}

fn distances(points: &[Vector], norm: &Norm) -> Result<Vec<Vec<Real>>> {
    let n = points.len();
    let mut d = vec![vec![Real::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = norm.eval(points[i].sub(&points[j]).coords())?;
            d[i][j] = v.clone();
            d[j][i] = v;
        }
    }
    Ok(d)
}

/// A proper coloring with at most `m` colors, if one exists.
///
/// Vertices are colored in order of decreasing degree; a vertex may open at
/// most one new color, which removes the color-permutation symmetry.
pub fn m_colorable(g: &DistanceGraph, m: usize) -> Option<Vec<usize>> {
    let n = g.len();
    if n == 0 {
        return Some(Vec::new());
    }
    if m == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    let degree = |v: usize| g.adjacency[v].iter().filter(|&&e| e).count();
    order.sort_by_key(|&v| std::cmp::Reverse(degree(v)));
    let mut color = vec![usize::MAX; n];

    fn go(
        g: &DistanceGraph,
        order: &[usize],
        k: usize,
        used: usize,
        m: usize,
        color: &mut [usize],
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        for c in 0..(used + 1).min(m) {
            if (0..g.len()).any(|u| g.adjacency[v][u] && color[u] == c) {
                continue;
            }
            color[v] = c;
            if go(g, order, k + 1, used.max(c + 1), m, color) {
                return true;
            }
            color[v] = usize::MAX;
        }
        false
    }

    go(g, &order, 0, 0, m, &mut color).then_some(color)
}

#[derive(Clone, Debug)]
pub struct ExactBetaResult {
    /// `δ*/diam(A)`, or 0.
    pub value: Real,
    pub threshold: Real,
    pub diameter: Real,
    /// Part index of each point.
    pub witness: Vec<usize>,
}

impl ExactBetaResult {
    pub fn parts(&self) -> Vec<Vec<usize>> {
        let k = self.witness.iter().max().map_or(0, |c| c + 1);
        let mut parts = vec![Vec::new(); k];
        for (i, &c) in self.witness.iter().enumerate() {
            parts[c].push(i);
        }
        parts
    }
}

pub fn beta_finite_exact(points: &[Vector], m: usize, norm: &Norm) -> Result<ExactBetaResult> {
    if points.is_empty() {
        return Err(Error::Empty);
    }
    if points.len() > MAX_POINTS {
        return Err(Error::BudgetExceeded(format!(
            "{} points (limit {MAX_POINTS})",
            points.len()
        )));
    }
    if m == 0 || m > MAX_PARTS {
        return Err(Error::BudgetExceeded(format!(
            "m = {m} outside 1..={MAX_PARTS}"
        )));
    }
    let dim = points[0].dim();
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    norm.check_dim(dim)?;
    let dist = distances(points, norm)?;
    let mut candidates: Vec<Real> = vec![Real::zero()];
    for (i, row) in dist.iter().enumerate() {
        candidates.extend(row[i + 1..].iter().cloned());
    }
    candidates.sort_by(|a, b| a.cmp_real(b));
    candidates.dedup_by(|a, b| a.cmp_real(b) == Ordering::Equal);
    let diameter = candidates.last().expect("zero is a candidate").clone();

    // The largest candidate (the diameter) is always feasible.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    let mut best = m_colorable(&DistanceGraph::from_distances(&dist, diameter.clone()), m)
        .expect("an edgeless graph is 1-colorable");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match m_colorable(
            &DistanceGraph::from_distances(&dist, candidates[mid].clone()),
            m,
        ) {
            Some(c) => {
                hi = mid;
                best = c;
            }
            None => lo = mid + 1,
        }
    }
    let threshold = candidates[hi].clone();
    let value = if diameter.cmp_real(&Real::zero()) == Ordering::Equal {
        Real::zero()
    } else {
        threshold.div(&diameter).expect("positive diameter")
    };
    Ok(ExactBetaResult {
        value,
        threshold,
        diameter,
        witness: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::real::{q, qi};

    fn triangle_with_midpoints() -> Vec<Vector> {
        let e = |i: usize| Vector::unit(3, i);
        let mid = |i: usize, j: usize| e(i).add(&e(j)).scale(&q(1, 2));
        vec![e(0), e(1), e(2), mid(0, 1), mid(1, 2), mid(0, 2)]
    }

    #[test]
    fn triangle_is_one_half() {
        let pts = triangle_with_midpoints();
        let r = beta_finite_exact(&pts, 4, &Norm::l2()).unwrap();
        assert!(r.value.exactly_equals(&Real::Exact(q(1, 2))));
        let g = DistanceGraph::new(&pts, &Norm::l2(), r.threshold.clone()).unwrap();
        assert!(g.is_proper(&r.witness));
        // Just below the threshold four parts are not enough.
        let below = Real::Float(r.threshold.to_f64() * (1.0 - 1e-9));
        let g = DistanceGraph::new(&pts, &Norm::l2(), below).unwrap();
        assert!(m_colorable(&g, 4).is_none());
    }

    #[test]
    fn small_graphs() {
        let k4 = DistanceGraph {
            threshold: Real::zero(),
            adjacency: (0..4).map(|i| (0..4).map(|j| i != j).collect()).collect(),
        };
        assert!(m_colorable(&k4, 3).is_none());
        assert!(k4.is_proper(&m_colorable(&k4, 4).unwrap()));
        let empty = DistanceGraph {
            threshold: Real::zero(),
            adjacency: vec![vec![false; 5]; 5],
        };
        assert_eq!(m_colorable(&empty, 1), Some(vec![0; 5]));
    }

    #[test]
    fn square_and_singletons() {
        let sq: Vec<Vector> = [[0, 0], [1, 0], [1, 1], [0, 1]]
            .iter()
            .map(|c| Vector::from_ints(c))
            .collect();
        let r = beta_finite_exact(&sq, 2, &Norm::l2()).unwrap();
        assert!(r.value.exactly_equals(&Real::sqrt_of(q(1, 2))));
        let r = beta_finite_exact(&sq, 4, &Norm::linf()).unwrap();
        assert!(r.value.exactly_equals(&Real::zero()));
        let too_many: Vec<Vector> = (0..15).map(|i| Vector::from_ints(&[i])).collect();
        assert!(beta_finite_exact(&too_many, 2, &Norm::l1()).is_err());
        assert_eq!(r.diameter, Real::Exact(qi(1)));
    }
}
