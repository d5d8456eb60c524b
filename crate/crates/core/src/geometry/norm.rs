//! l_p norms and gauges of origin-symmetric polytopes.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::lp::{LinearProgram, Relation};
use super::polytope::{Halfspace, VPolytope};
use super::real::{parse_q, q_to_f64, Real, Q};
use super::vector::Vector;
use crate::error::{Error, Result};

/// An exponent `p ∈ [1, ∞]`. Infinity is its own variant, never a large float.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            return Ok(Exponent::Infinity);
        }
        if !(p >= 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        Ok(Exponent::Finite(p))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if matches!(t.as_str(), "inf" | "infinity" | "∞") {
            return Ok(Exponent::Infinity);
        }
        let p = parse_q(&t)
            .map(|x| q_to_f64(&x))
            .ok_or_else(|| Error::Parse(format!("invalid exponent {:?}", s)))?;
        Exponent::new(p)
    }

    pub fn is_one(self) -> bool {
        self == Exponent::ONE
    }

    pub fn is_two(self) -> bool {
        self == Exponent::TWO
    }

    pub fn is_infinite(self) -> bool {
        self == Exponent::Infinity
    }

    /// `p` as a float, `f64::INFINITY` for ∞.
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// Hölder conjugate.
    pub fn dual(self) -> Exponent {
        dual_exponent(self)
    }

    pub fn render(self) -> String {
        match self {
            Exponent::Infinity => "inf".into(),
            Exponent::Finite(p) if p.fract() == 0.0 && p < 1e15 => format!("{}", p as i64),
            Exponent::Finite(p) => format!("{}", p),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `q` with `1/p + 1/q = 1`.
pub fn dual_exponent(p: Exponent) -> Exponent {
    match p {
        Exponent::Infinity => Exponent::ONE,
        Exponent::Finite(x) if x == 1.0 => Exponent::Infinity,
        Exponent::Finite(x) => Exponent::Finite(x / (x - 1.0)),
    }
}

/// `‖x‖_p` for floats, scaled by the largest entry to avoid overflow.
pub fn pnorm_f64(x: &[f64], p: Exponent) -> f64 {
    let m = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    match p {
        Exponent::Infinity => m,
        _ if m == 0.0 => 0.0,
        Exponent::Finite(p) if p == 1.0 => x.iter().map(|v| v.abs()).sum(),
        Exponent::Finite(p) if p == 2.0 => {
            m * x.iter().map(|v| (v / m) * (v / m)).sum::<f64>().sqrt()
        }
        Exponent::Finite(p) => {
            m * x
                .iter()
                .map(|v| (v.abs() / m).powf(p))
                .sum::<f64>()
                .powf(1.0 / p)
        }
    }
}

/// `‖x‖_p` of a rational vector: exact for p ∈ {1, ∞}, an exact square root
/// for p = 2, a float otherwise.
pub fn pnorm_eval(x: &[Q], p: Exponent) -> Real {
    match p {
        Exponent::Infinity => Real::Exact(x.iter().map(|v| v.abs()).max().unwrap_or_else(Q::zero)),
        _ if p.is_one() => Real::Exact(x.iter().map(|v| v.abs()).sum()),
        _ if p.is_two() => Real::sqrt_of(x.iter().map(|v| v * v).sum()),
        _ => {
            let xf: Vec<f64> = x.iter().map(q_to_f64).collect();
            Real::Float(pnorm_f64(&xf, p))
        }
    }
}

/// An origin-symmetric, full-dimensional polytope used as a unit ball.
#[derive(Clone, Debug)]
pub struct GaugeBody {
    polytope: VPolytope,
    /// Facet normals `a` with `a · x ≤ 1` on the body.
    facets: Vec<Vector>,
}

impl GaugeBody {
    pub fn new(polytope: VPolytope) -> Result<Self> {
        if !polytope.is_origin_symmetric() {
            return Err(Error::InvalidGauge(
                "vertex set is not closed under x ↦ -x".into(),
            ));
        }
        if !polytope.is_full_dimensional() {
            return Err(Error::InvalidGauge(
                "origin is not interior (body is flat)".into(),
            ));
        }
        let facets = polytope
            .facets()?
            .into_iter()
            .map(|h: Halfspace| {
                debug_assert!(h.offset.is_positive());
                h.normal.scale(&(Q::one() / &h.offset))
            })
            .collect();
        Ok(GaugeBody { polytope, facets })
    }

    pub fn from_vertices(vertices: Vec<Vector>) -> Result<Self> {
        Self::new(VPolytope::new(vertices)?)
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn polytope(&self) -> &VPolytope {
        &self.polytope
    }

    pub fn facet_normals(&self) -> &[Vector] {
        &self.facets
    }

    /// Minkowski functional by linear programming:
    /// `min Σαⱼ  s.t.  Σαⱼ vⱼ = x, α ≥ 0`.
    pub fn gauge_lp(&self, x: &[Q]) -> Q {
        if x.iter().all(Zero::is_zero) {
            return Q::zero();
        }
        let verts = self.polytope.vertices();
        let mut lp = LinearProgram::minimize(vec![Q::one(); verts.len()]);
        for i in 0..self.dim() {
            lp.add(
                verts.iter().map(|v| v[i].clone()).collect(),
                Relation::Eq,
                x[i].clone(),
            );
        }
        lp.solve()
            .optimal()
            .expect("a full-dimensional symmetric body absorbs every vector")
            .objective
    }

    /// Minkowski functional from the facet description: `max_k aₖ · x`.
    pub fn gauge_by_facets(&self, x: &[Q]) -> Q {
        self.facets
            .iter()
            .map(|a| a.iter().zip(x).fold(Q::zero(), |acc, (u, v)| acc + u * v))
            .max()
            .unwrap_or_else(Q::zero)
            .max(Q::zero())
    }

    pub fn gauge_f64(&self, x: &[f64]) -> f64 {
        self.facets
            .iter()
            .map(|a| a.iter().zip(x).map(|(u, v)| q_to_f64(u) * v).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub enum Norm {
    P(Exponent),
    Gauge(Arc<GaugeBody>),
}

impl Norm {
    pub fn p(p: f64) -> Result<Norm> {
        Ok(Norm::P(Exponent::new(p)?))
    }

    pub fn l1() -> Norm {
        Norm::P(Exponent::ONE)
    }

    pub fn l2() -> Norm {
        Norm::P(Exponent::TWO)
    }

    pub fn linf() -> Norm {
        Norm::P(Exponent::Infinity)
    }

    pub fn gauge(body: GaugeBody) -> Norm {
        Norm::Gauge(Arc::new(body))
    }

    /// Unit ball has finitely many extreme points (p ∈ {1, ∞} or a gauge).
    pub fn is_polyhedral(&self) -> bool {
        match self {
            Norm::P(p) => p.is_one() || p.is_infinite(),
            Norm::Gauge(_) => true,
        }
    }

    pub fn exponent(&self) -> Option<Exponent> {
        match self {
            Norm::P(p) => Some(*p),
            Norm::Gauge(_) => None,
        }
    }

    /// Dimension the norm is tied to, if any.
    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            Norm::P(_) => None,
            Norm::Gauge(g) => Some(g.dim()),
        }
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.fixed_dim() {
            Some(d) if d != dim => Err(Error::DimensionMismatch {
                expected: d,
                found: dim,
            }),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: &[Q]) -> Result<Real> {
        norm_eval(x, self)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        match self {
            Norm::P(p) => pnorm_f64(x, *p),
            Norm::Gauge(g) => g.gauge_f64(x),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Norm::P(p) => format!("l{}", p),
            Norm::Gauge(g) => format!("gauge({} vertices)", g.polytope().vertices().len()),
        }
    }
}

/// `‖x‖` under `norm`. Gauges are evaluated exactly by linear programming.
pub fn norm_eval(x: &[Q], norm: &Norm) -> Result<Real> {
    match norm {
        Norm::P(p) => Ok(pnorm_eval(x, *p)),
        Norm::Gauge(g) => {
            norm.check_dim(x.len())?;
            Ok(Real::Exact(g.gauge_lp(x)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::real::{q, qi};

    fn v(c: &[i64]) -> Vec<Q> {
        c.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn pnorm_examples() {
        let two = pnorm_eval(&v(&[1, 1, 4]), Exponent::TWO);
        assert!(two.exactly_equals(&Real::sqrt_of(qi(18))));
        assert!((two.to_f64() - 4.242640687).abs() < 1e-9);
        assert_eq!(
            pnorm_eval(&v(&[-2, 8, -2]), Exponent::ONE).as_rational(),
            Some(&qi(12))
        );
        assert_eq!(
            pnorm_eval(&v(&[4, 4, 4]), Exponent::Infinity).as_rational(),
            Some(&qi(4))
        );
    }

    #[test]
    fn vertex_is_twice_short_vector() {
        for p in [1.0, 1.3, 1.5, 2.0, 3.0, 7.5] {
            let e = Exponent::new(p).unwrap();
            let a = pnorm_eval(&v(&[-2, 8, -2]), e).to_f64();
            let b = pnorm_eval(&v(&[1, 1, 4]), e).to_f64();
            assert!((a - 2.0 * b).abs() < 1e-12, "p = {}", p);
        }
    }

    #[test]
    fn exponent_below_one_rejected() {
        assert_eq!(Exponent::new(0.5), Err(Error::InvalidExponent(0.5)));
        assert!(Exponent::parse("inf").unwrap().is_infinite());
        assert_eq!(Exponent::parse("3/2").unwrap(), Exponent::Finite(1.5));
    }

    #[test]
    fn dual_exponent_examples() {
        assert_eq!(dual_exponent(Exponent::TWO), Exponent::TWO);
        assert_eq!(dual_exponent(Exponent::ONE), Exponent::Infinity);
        assert_eq!(dual_exponent(Exponent::Infinity), Exponent::ONE);
        match dual_exponent(Exponent::Finite(4.0)) {
            Exponent::Finite(q) => assert!((q - 4.0 / 3.0).abs() < 1e-15),
            _ => panic!(),
        }
    }

    #[test]
    fn cube_gauge_is_max_norm() {
        let g = GaugeBody::new(VPolytope::cube(3)).unwrap();
        let x = vec![qi(1), qi(-2), q(1, 2)];
        assert_eq!(g.gauge_lp(&x), qi(2));
        assert_eq!(g.gauge_by_facets(&x), qi(2));
        for vert in g.polytope().vertices() {
            assert_eq!(g.gauge_lp(vert), qi(1));
        }
        assert_eq!(g.gauge_lp(&v(&[0, 0, 0])), qi(0));
    }

    #[test]
    fn gauge_requires_symmetry_and_interior() {
        let tri = VPolytope::new(vec![
            Vector::from_ints(&[1, 0]),
            Vector::from_ints(&[0, 1]),
            Vector::from_ints(&[-1, -1]),
        ])
        .unwrap();
        assert!(matches!(GaugeBody::new(tri), Err(Error::InvalidGauge(_))));
        let flat = VPolytope::new(vec![
            Vector::from_ints(&[1, 0]),
            Vector::from_ints(&[-1, 0]),
        ])
        .unwrap();
        assert!(matches!(GaugeBody::new(flat), Err(Error::InvalidGauge(_))));
    }

    #[test]
    fn gauge_dimension_checked() {
        let n = Norm::gauge(GaugeBody::new(VPolytope::cube(2)).unwrap());
        assert!(matches!(
            n.eval(&v(&[1, 2, 3])),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
