//! Vertex-described polytopes, simplices, homothets and halfspaces.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use super::linalg::{inverse, mat_vec, null_vector, rank, solve};
use super::lp::{LinearProgram, LpOutcome, Relation};
use super::real::{q_to_f64, qi, Q};
use super::vector::Vector;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arithmetic {
    Exact,
    Float,
}

/// `normal · x ≤ offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: Q,
}

impl Halfspace {
    pub fn new(normal: Vector, offset: Q) -> Self {
        Halfspace { normal, offset }
    }

    /// `offset - normal · x`; non-negative inside.
    pub fn slack(&self, x: &[Q]) -> Q {
        let mut s = self.offset.clone();
        for (a, b) in self.normal.iter().zip(x) {
            s -= a * b;
        }
        s
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        !self.slack(x).is_negative()
    }

    /// Scaled so the first nonzero entry of `(normal, offset)` has magnitude one.
    fn canonical(&self) -> Halfspace {
        let lead = self
            .normal
            .iter()
            .chain(std::iter::once(&self.offset))
            .find(|c| !c.is_zero())
            .map(|c| c.abs())
            .unwrap_or_else(Q::one);
        Halfspace {
            normal: self.normal.scale(&(Q::one() / &lead)),
            offset: &self.offset / &lead,
        }
    }
}

fn check_dims(points: &[Vector]) -> Result<usize> {
    let first = points.first().ok_or(Error::Empty)?;
    let dim = first.dim();
    if dim == 0 {
        return Err(Error::UnsupportedDimension(0));
    }
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
    }
    Ok(dim)
}

/// Dimension of the affine hull of `points`.
pub fn affine_rank(points: &[Vector]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let rows: Vec<Vec<Q>> = points[1..]
        .iter()
        .map(|p| p.sub(base).into_coords())
        .collect();
    rank(&rows)
}

/// A polytope given as the convex hull of a vertex list (not necessarily minimal).
#[derive(Clone, Debug)]
pub struct VPolytope {
    vertices: Vec<Vector>,
    dim: usize,
    /// Memoized [`VPolytope::halfspaces`]; homothets of one base share it.
    outer: OnceLock<Vec<Halfspace>>,
}

impl PartialEq for VPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl VPolytope {
    pub fn new(vertices: Vec<Vector>) -> Result<Self> {
        let dim = check_dims(&vertices)?;
        Ok(VPolytope {
            vertices,
            dim,
            outer: OnceLock::new(),
        })
    }

    /// `[-1, 1]ⁿ`.
    pub fn cube(dim: usize) -> Self {
        let vertices = (0..1usize << dim)
            .map(|mask| {
                Vector::new(
                    (0..dim)
                        .map(|i| if mask >> i & 1 == 1 { qi(1) } else { qi(-1) })
                        .collect(),
                )
            })
            .collect();
        VPolytope {
            vertices,
            dim,
            outer: OnceLock::new(),
        }
    }

    /// Unit ball of l₁ⁿ: `conv{±eᵢ}`.
    pub fn cross_polytope(dim: usize) -> Self {
        let vertices = (0..dim)
            .flat_map(|i| {
                let e = Vector::unit(dim, i);
                [e.clone(), e.neg()]
            })
            .collect();
        VPolytope {
            vertices,
            dim,
            outer: OnceLock::new(),
        }
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn centroid(&self) -> Vector {
        Vector::centroid(&self.vertices)
    }

    pub fn is_full_dimensional(&self) -> bool {
        affine_rank(&self.vertices) == self.dim
    }

    pub fn require_full_dimensional(&self) -> Result<()> {
        if self.is_full_dimensional() {
            Ok(())
        } else {
            Err(Error::Degenerate(format!(
                "polytope with {} vertices spans less than {} dimensions",
                self.vertices.len(),
                self.dim
            )))
        }
    }

    /// `ratio · P + translation`, vertex-wise.
    pub fn map_homothety(&self, ratio: &Q, translation: &Vector) -> VPolytope {
        // Vertex coordinates repeat heavily (a cube has two values per
        // axis), so each distinct value is mapped once.
        let mut seen: Vec<std::collections::BTreeMap<&Q, Q>> = vec![Default::default(); self.dim];
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                Vector::new(
                    v.iter()
                        .enumerate()
                        .map(|(j, x)| {
                            seen[j]
                                .entry(x)
                                .or_insert_with(|| x * ratio + &translation[j])
                                .clone()
                        })
                        .collect(),
                )
            })
            .collect();
        VPolytope {
            vertices,
            dim: self.dim,
            outer: OnceLock::new(),
        }
    }

    /// Vertices as a set (order and duplicates ignored).
    pub fn vertex_set(&self) -> BTreeSet<Vector> {
        self.vertices.iter().cloned().collect()
    }

    /// Equality of the vertex set with its reflection through the origin.
    pub fn is_origin_symmetric(&self) -> bool {
        let set = self.vertex_set();
        set.iter().all(|v| set.contains(&v.neg()))
    }

    /// Returns per-axis `(lo, hi)` when the vertex set is exactly the corner
    /// set of an axis-parallel box.
    pub fn as_box(&self) -> Option<Vec<(Q, Q)>> {
        let n = self.dim;
        let set = self.vertex_set();
        if set.len() != 1 << n {
            return None;
        }
        let mut bounds = Vec::with_capacity(n);
        for i in 0..n {
            let lo = set.iter().map(|v| &v[i]).min()?.clone();
            let hi = set.iter().map(|v| &v[i]).max()?.clone();
            if lo == hi {
                return None;
            }
            bounds.push((lo, hi));
        }
        let ok = set
            .iter()
            .all(|v| (0..n).all(|i| v[i] == bounds[i].0 || v[i] == bounds[i].1));
        ok.then_some(bounds)
    }

    /// Facet halfspaces of a full-dimensional polytope by brute force over
    /// `n`-subsets of vertices. Intended for the small vertex counts used here.
    pub fn facets(&self) -> Result<Vec<Halfspace>> {
        self.require_full_dimensional()?;
        let n = self.dim;
        let verts: Vec<Vector> = self.vertex_set().into_iter().collect();
        let mut out = BTreeSet::new();
        for subset in (0..verts.len()).combinations(n) {
            let p0 = &verts[subset[0]];
            let rows: Vec<Vec<Q>> = subset[1..]
                .iter()
                .map(|&i| verts[i].sub(p0).into_coords())
                .collect();
            if n > 1 && rank(&rows) < n - 1 {
                continue;
            }
            let normal = if n == 1 {
                vec![qi(1)]
            } else {
                match null_vector(&rows, n) {
                    Some(v) => v,
                    None => continue,
                }
            };
            let normal = Vector::new(normal);
            let offset = normal.dot(p0);
            let (mut above, mut below) = (false, false);
            for v in &verts {
                let s = normal.dot(v) - &offset;
                if s.is_positive() {
                    above = true;
                } else if s.is_negative() {
                    below = true;
                }
                if above && below {
                    break;
                }
            }
            let h = match (above, below) {
                (true, true) => continue,
                (true, false) => Halfspace::new(normal.neg(), -offset),
                _ => Halfspace::new(normal, offset),
            };
            out.insert(h.canonical());
        }
        Ok(out.into_iter().collect())
    }

    /// Outer description used for membership tests: exact box bounds, the
    /// barycentric facets of a simplex, or brute-force facets otherwise.
    pub fn halfspaces(&self) -> Result<Vec<Halfspace>> {
        if let Some(hs) = self.outer.get() {
            return Ok(hs.clone());
        }
        let hs = self.compute_halfspaces()?;
        Ok(self.outer.get_or_init(|| hs).clone())
    }

    fn compute_halfspaces(&self) -> Result<Vec<Halfspace>> {
        if let Some(bounds) = self.as_box() {
            let n = self.dim;
            let mut hs = Vec::with_capacity(2 * n);
            for (i, (lo, hi)) in bounds.into_iter().enumerate() {
                let e = Vector::unit(n, i);
                hs.push(Halfspace::new(e.neg(), -lo));
                hs.push(Halfspace::new(e, hi));
            }
            return Ok(hs);
        }
        if self.vertex_set().len() == self.dim + 1 {
            if let Ok(s) = Simplex::new(self.vertex_set().into_iter().collect()) {
                return Ok(s.halfspaces());
            }
        }
        self.facets()
    }

    pub fn contains(&self, x: &Vector, mode: Arithmetic) -> Result<bool> {
        point_in_vpolytope(self, x, mode)
    }
}

/// Convex-combination feasibility: is `x` in the hull of `p`'s vertices?
pub fn point_in_vpolytope(p: &VPolytope, x: &Vector, mode: Arithmetic) -> Result<bool> {
    if x.dim() != p.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            found: x.dim(),
        });
    }
    let k = p.vertices.len();
    Ok(match mode {
        Arithmetic::Exact => {
            let mut lp: LinearProgram<Q> = LinearProgram::feasibility(k);
            for i in 0..p.dim {
                lp.add(
                    p.vertices.iter().map(|v| v[i].clone()).collect(),
                    Relation::Eq,
                    x[i].clone(),
                );
            }
            lp.add(vec![Q::one(); k], Relation::Eq, Q::one());
            !matches!(lp.solve(), LpOutcome::Infeasible)
        }
        Arithmetic::Float => {
            let mut lp: LinearProgram<f64> = LinearProgram::feasibility(k);
            for i in 0..p.dim {
                lp.add(
                    p.vertices.iter().map(|v| q_to_f64(&v[i])).collect(),
                    Relation::Eq,
                    q_to_f64(&x[i]),
                );
            }
            lp.add(vec![1.0; k], Relation::Eq, 1.0);
            !matches!(lp.solve(), LpOutcome::Infeasible)
        }
    })
}

/// Enumerates the vertices of `{x : aᵢ·x ≤ bᵢ}` in ℝ^dim by brute force over
/// `dim`-subsets of tight constraints.
pub fn enumerate_vertices(halfspaces: &[Halfspace], dim: usize) -> Vec<Vector> {
    let mut out = BTreeSet::new();
    for subset in (0..halfspaces.len()).combinations(dim) {
        let a: Vec<Vec<Q>> = subset
            .iter()
            .map(|&i| halfspaces[i].normal.coords().to_vec())
            .collect();
        let b: Vec<Q> = subset
            .iter()
            .map(|&i| halfspaces[i].offset.clone())
            .collect();
        let Some(x) = solve(&a, &b) else { continue };
        if halfspaces.iter().all(|h| h.contains(&x)) {
            out.insert(Vector::new(x));
        }
    }
    out.into_iter().collect()
}

/// A nondegenerate n-simplex (n+1 affinely independent vertices).
#[derive(Clone, Debug)]
pub struct Simplex {
    vertices: Vec<Vector>,
    /// Inverse of the (n+1)×(n+1) matrix with columns `(vᵢ, 1)`.
    to_barycentric: Vec<Vec<Q>>,
}

impl PartialEq for Simplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Simplex {
    pub fn new(vertices: Vec<Vector>) -> Result<Self> {
        let dim = check_dims(&vertices)?;
        if vertices.len() != dim + 1 {
            return Err(Error::Degenerate(format!(
                "a simplex in dimension {} needs {} vertices, got {}",
                dim,
                dim + 1,
                vertices.len()
            )));
        }
        let m: Vec<Vec<Q>> = (0..=dim)
            .map(|row| {
                vertices
                    .iter()
                    .map(|v| if row < dim { v[row].clone() } else { Q::one() })
                    .collect()
            })
            .collect();
        let to_barycentric = inverse(&m)
            .ok_or_else(|| Error::Degenerate("simplex vertices are affinely dependent".into()))?;
        Ok(Simplex {
            vertices,
            to_barycentric,
        })
    }

    /// The standard simplex `conv{0, e₁, …, eₙ}`.
    pub fn standard(dim: usize) -> Self {
        let mut v = vec![Vector::zeros(dim)];
        v.extend((0..dim).map(|i| Vector::unit(dim, i)));
        Simplex::new(v).expect("standard simplex is nondegenerate")
    }

    /// Regular tetrahedron `{(1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1)}` (edge 2√2).
    pub fn regular_tetrahedron() -> Self {
        Simplex::new(vec![
            Vector::from_ints(&[1, 1, 1]),
            Vector::from_ints(&[1, -1, -1]),
            Vector::from_ints(&[-1, 1, -1]),
            Vector::from_ints(&[-1, -1, 1]),
        ])
        .expect("regular tetrahedron")
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn centroid(&self) -> Vector {
        Vector::centroid(&self.vertices)
    }

    pub fn to_polytope(&self) -> VPolytope {
        VPolytope::new(self.vertices.clone()).expect("simplex vertices share a dimension")
    }

    /// Signed affine coordinates of `x`: `Σλᵢ = 1`, `Σλᵢvᵢ = x`.
    pub fn barycentric_coords(&self, x: &Vector) -> Result<Vec<Q>> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        let mut h = x.coords().to_vec();
        h.push(Q::one());
        Ok(mat_vec(&self.to_barycentric, &h))
    }

    pub fn from_barycentric(&self, lambdas: &[Q]) -> Vector {
        Vector::combination(&self.vertices, lambdas)
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        Ok(self.barycentric_coords(x)?.iter().all(|l| !l.is_negative()))
    }

    /// `λᵢ(x) ≥ 0` for each vertex, written as Cartesian halfspaces.
    pub fn halfspaces(&self) -> Vec<Halfspace> {
        let n = self.dim();
        self.to_barycentric
            .iter()
            .map(|row| {
                // λᵢ(x) = row[..n]·x + row[n] ≥ 0  ⇔  -row[..n]·x ≤ row[n]
                Halfspace::new(
                    Vector::new(row[..n].iter().map(|c| -c).collect()),
                    row[n].clone(),
                )
            })
            .collect()
    }

    /// Halfspaces `lo ≤ λᵢ(x) ≤ hi` in Cartesian form.
    pub fn barycentric_box_halfspaces(&self, lower: &[Q], upper: &[Q]) -> Vec<Halfspace> {
        let n = self.dim();
        let mut out = Vec::new();
        for (i, row) in self.to_barycentric.iter().enumerate() {
            let lin = Vector::new(row[..n].to_vec());
            // λᵢ ≥ lo  ⇔  -lin·x ≤ row[n] - lo
            out.push(Halfspace::new(lin.neg(), &row[n] - &lower[i]));
            // λᵢ ≤ hi  ⇔  lin·x ≤ hi - row[n]
            out.push(Halfspace::new(lin, &upper[i] - &row[n]));
        }
        out
    }

    /// `ratio · (S - c) + c` about the centroid `c`.
    pub fn homothet_about_centroid(&self, ratio: &Q) -> Homothet {
        let c = self.centroid();
        Homothet::new(
            ratio.clone(),
            c.scale(&(Q::one() - ratio)),
            Arc::new(self.to_polytope()),
        )
        .expect("nonzero ratio")
    }
}

/// A point of a simplex in barycentric form.
#[derive(Clone, Debug, PartialEq)]
pub struct BarycentricPoint {
    lambdas: Vec<Q>,
}

impl BarycentricPoint {
    pub fn new(lambdas: Vec<Q>) -> Result<Self> {
        if lambdas.iter().any(|l| l.is_negative()) {
            return Err(Error::OutOfRange("negative barycentric coordinate".into()));
        }
        let sum: Q = lambdas.iter().sum();
        if !sum.is_one() {
            return Err(Error::OutOfRange(format!(
                "barycentric coordinates sum to {}",
                sum
            )));
        }
        Ok(BarycentricPoint { lambdas })
    }

    pub fn lambdas(&self) -> &[Q] {
        &self.lambdas
    }
}

/// The image of `base` under `x ↦ ratio·x + translation`.
#[derive(Clone, Debug)]
pub struct Homothet {
    pub ratio: Q,
    pub translation: Vector,
    pub base: Arc<VPolytope>,
}

impl Homothet {
    pub fn new(ratio: Q, translation: Vector, base: Arc<VPolytope>) -> Result<Self> {
        if ratio.is_zero() {
            return Err(Error::OutOfRange("homothety ratio must be nonzero".into()));
        }
        if translation.dim() != base.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                found: translation.dim(),
            });
        }
        Ok(Homothet {
            ratio,
            translation,
            base,
        })
    }

    pub fn identity(base: Arc<VPolytope>) -> Self {
        let dim = base.dim();
        Homothet {
            ratio: Q::one(),
            translation: Vector::zeros(dim),
            base,
        }
    }

    pub fn apply(&self) -> VPolytope {
        self.base.map_homothety(&self.ratio, &self.translation)
    }

    pub fn map_point(&self, x: &Vector) -> Vector {
        x.scale(&self.ratio).add(&self.translation)
    }

    /// `outer ∘ self` as a homothet of the same base.
    pub fn then(&self, ratio: &Q, translation: &Vector) -> Homothet {
        Homothet {
            ratio: &self.ratio * ratio,
            translation: self.translation.scale(ratio).add(translation),
            base: self.base.clone(),
        }
    }

    /// Halfspaces of the image, derived from the base's outer description.
    pub fn halfspaces(&self) -> Result<Vec<Halfspace>> {
        let base = self.base.halfspaces()?;
        Ok(base
            .into_iter()
            .map(|h| {
                // x ∈ ρB + t  ⇔  a·(x - t) ≤ ρb (ρ > 0), a·(x - t) ≥ ρb (ρ < 0)
                let at = h.normal.dot(&self.translation);
                if self.ratio.is_positive() {
                    Halfspace::new(h.normal, &self.ratio * &h.offset + at)
                } else {
                    Halfspace::new(h.normal.neg(), -(&self.ratio * &h.offset) - at)
                }
            })
            .collect())
    }
}

/// Vertices of `{λ ∈ [0, t]ⁿ⁺¹ : Σλ = 1}` by pattern enumeration: every
/// vertex has at most one coordinate strictly between 0 and t.
pub fn capped_simplex_patterns(parts: usize, cap: &Q) -> Vec<Vec<Q>> {
    let mut out = BTreeSet::new();
    if !cap.is_positive() {
        return Vec::new();
    }
    for k in 0..=parts {
        let rest = Q::one() - cap * qi(k as i64);
        if rest.is_negative() {
            break;
        }
        for at_cap in (0..parts).combinations(k) {
            let mut base = vec![Q::zero(); parts];
            for &i in &at_cap {
                base[i] = cap.clone();
            }
            if rest.is_zero() {
                out.insert(base);
                continue;
            }
            if &rest > cap {
                continue;
            }
            for j in (0..parts).filter(|j| !at_cap.contains(j)) {
                let mut v = base.clone();
                v[j] = rest.clone();
                out.insert(v);
            }
        }
    }
    out.into_iter().collect()
}
