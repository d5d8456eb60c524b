//! The parallelepiped `Q = {Σσᵢcᵢ}` sandwiching `B_p³` for `p ∈ [1, 2]`,
//! and the product `f(p) = ‖(1,1,4)‖_p·‖(3,1,3)‖_q` it leads to.

use std::cmp::Ordering;

use super::{sandwich_verify, BmBoundReport, BmMethod};
use crate::error::{Error, Result};
use crate::geometry::body::Body;
use crate::geometry::norm::{pnorm_eval, Exponent, GaugeBody};
use crate::geometry::real::{q, qi, Real, Q};
use crate::geometry::vector::Vector;

pub fn edge_triple() -> [Vector; 3] {
    [
        Vector::from_ints(&[3, 3, -2]),
        Vector::from_ints(&[-2, 3, 3]),
        Vector::from_ints(&[3, -2, 3]),
    ]
}

/// Facet functionals of `Q`; `fₖ = 1` on `c_{apex} + span` of the other two.
fn facet_functionals() -> [(Vector, usize); 3] {
    let f = |a: i64, b: i64, c: i64| Vector::new(vec![q(a, 100), q(b, 100), q(c, 100)]);
    [(f(15, -5, 15), 2), (f(-5, 15, 15), 1), (f(15, 15, -5), 0)]
}

pub fn parallelepiped_vertices(c: &[Vector; 3]) -> Vec<Vector> {
    (0..8u32)
        .map(|mask| {
            let w: Vec<Q> = (0..3)
                .map(|i| if mask >> i & 1 == 1 { qi(-1) } else { qi(1) })
                .collect();
            Vector::combination(c, &w)
        })
        .collect()
}

/// Largest `‖v‖_p` over `vertices` and every vertex attaining it (exact ties
/// for `p ∈ {1, 2, ∞}`, relative `1e-12` otherwise).
pub fn vertex_norm_argmax(vertices: &[Vector], p: Exponent) -> (Real, Vec<Vector>) {
    let norms: Vec<Real> = vertices.iter().map(|v| pnorm_eval(v.coords(), p)).collect();
    let max = norms
        .iter()
        .cloned()
        .reduce(Real::max)
        .unwrap_or_else(Real::zero);
    let arg = vertices
        .iter()
        .zip(&norms)
        .filter(|(_, n)| n.approx_eq(&max, 1e-12 * max.to_f64()))
        .map(|(v, _)| v.clone())
        .collect();
    (max, arg)
}

#[derive(Clone, Debug)]
pub struct FacetCheck {
    pub functional: Vector,
    /// Index of the `cᵢ` on which the functional is 1.
    pub apex: usize,
    /// The vertices of `Q` where the functional equals 1.
    pub facet: Vec<Vector>,
    pub holds: bool,
}

/// `fₖ(c_apex) = 1`, `fₖ = 0` on the other two, hence `fₖ = ±1` on the
/// vertices with exactly four at `+1`.
fn facet_checks(c: &[Vector; 3]) -> Vec<FacetCheck> {
    let verts = parallelepiped_vertices(c);
    facet_functionals()
        .into_iter()
        .map(|(f, apex)| {
            let on_basis = (0..3).all(|i| f.dot(&c[i]) == if i == apex { qi(1) } else { qi(0) });
            let facet: Vec<Vector> = verts
                .iter()
                .filter(|v| f.dot(v) == qi(1))
                .cloned()
                .collect();
            let rest_opposite = verts
                .iter()
                .filter(|v| f.dot(v) != qi(1))
                .all(|v| f.dot(v) == qi(-1));
            FacetCheck {
                holds: on_basis && facet.len() == 4 && rest_opposite,
                functional: f,
                apex,
                facet,
            }
        })
        .collect()
}

/// Sandwich `s·Q ⊆ B_p³ ⊆ γ s·Q` for any vertex triple: `s` is the inverse
/// of the largest vertex norm and `γ s` the largest dual norm of a facet
/// normal of `Q`.
pub fn parallelepiped_bound_with(p: Exponent, c: &[Vector; 3]) -> Result<BmBoundReport> {
    let verts = parallelepiped_vertices(c);
    let body = GaugeBody::from_vertices(verts.clone())?;
    let (vmax, _) = vertex_norm_argmax(&verts, p);
    let scale = Real::one()
        .div(&vmax)
        .ok_or_else(|| Error::Degenerate("zero parallelepiped".into()))?;
    let alpha = body
        .facet_normals()
        .iter()
        .map(|a| pnorm_eval(a.coords(), p.dual()))
        .reduce(Real::max)
        .expect("facets");
    let gamma = alpha.mul(&vmax);
    let cert = sandwich_verify(body.polytope(), &scale, &Body::PBall { dim: 3, p }, &gamma)?;
    if !cert.verified {
        return Err(Error::VerificationFailed(format!(
            "parallelepiped sandwich at p = {p}: margins {:.3e}/{:.3e}/{:.3e}, witness {:?}",
            cert.inner_margin, cert.outer_margin, cert.sample_margin, cert.worst_witness
        )));
    }
    Ok(BmBoundReport {
        p,
        q: p.dual(),
        gamma_bound: gamma,
        method: BmMethod::Parallelepiped,
        certificate: cert,
        cited_equality: false,
    })
}

/// `γ(p) = ‖(1,1,4)‖_p ‖(3,1,3)‖_q / 10`.
fn gamma_formula(p: Exponent) -> Real {
    let a = pnorm_eval(Vector::from_ints(&[1, 1, 4]).coords(), p);
    let b = pnorm_eval(Vector::from_ints(&[3, 1, 3]).coords(), p.dual());
    a.mul(&b).mul(&Real::Exact(q(1, 10)))
}

pub fn lp_parallelepiped_bound(p: Exponent) -> Result<BmBoundReport> {
    if p.is_infinite() || p.value() > 2.0 {
        return Err(Error::OutOfRange(format!("p = {p} outside [1, 2]")));
    }
    let c = edge_triple();
    let checks = facet_checks(&c);
    if !checks.iter().all(|f| f.holds) {
        return Err(Error::VerificationFailed(
            "facet functional identities".into(),
        ));
    }
    // The functionals are exactly the facet normals of Q (up to sign).
    let body = GaugeBody::from_vertices(parallelepiped_vertices(&c))?;
    let mut normals: Vec<Vector> = body.facet_normals().to_vec();
    let mut expected: Vec<Vector> = checks
        .iter()
        .flat_map(|f| [f.functional.clone(), f.functional.neg()])
        .collect();
    normals.sort();
    expected.sort();
    if normals != expected {
        return Err(Error::VerificationFailed("facet normals of Q".into()));
    }
    let mut report = parallelepiped_bound_with(p, &c)?;
    let formula = gamma_formula(p);
    if !report.gamma_bound.approx_eq(&formula, 1e-12) {
        return Err(Error::VerificationFailed(format!(
            "γ = {} differs from the closed form {}",
            report.gamma_bound.render(),
            formula.render()
        )));
    }
    if formula.is_exact() {
        report.gamma_bound = formula;
    }
    Ok(report)
}

/// `f(p) = (4^p + 2)^{1/p} (2·3^{p/(p−1)} + 1)^{(p−1)/p}`, evaluated in log
/// space; `f(1) = 18` is the limit.
pub fn f_eval(p: f64) -> f64 {
    if p <= 1.0 {
        return 18.0;
    }
    let ln3 = 3f64.ln();
    let qv = p / (p - 1.0);
    // ln(4^p + 2)/p with 4^p factored out.
    let first = 4f64.ln() + (1.0 + 2.0 * (-p * 4f64.ln()).exp()).ln() / p;
    // ((p−1)/p)·ln(2·3^q + 1) = ln 3 + ((p−1)/p)·ln(2 + 3^{−q}).
    let second = ln3 + (2.0 + (-qv * ln3).exp()).ln() / qv;
    (first + second).exp()
}

#[derive(Clone, Debug)]
pub struct FScan {
    pub p0: f64,
    pub f_p0: f64,
    pub grid_points: usize,
    /// Sign changes of the forward differences on the grid.
    pub sign_changes: usize,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl FScan {
    pub fn unique_minimum(&self) -> bool {
        self.sign_changes == 1
    }
}

/// Coarse scan of `f` on `[lo, hi]`, then golden-section refinement around
/// the best grid point.
pub fn f_scan(lo: f64, hi: f64, step: f64) -> Result<FScan> {
    if !(lo >= 1.0 && hi > lo && step > 0.0 && hi.is_finite()) {
        return Err(Error::OutOfRange(format!("scan [{lo}, {hi}] step {step}")));
    }
    let count = ((hi - lo) / step).round() as usize + 1;
    let grid: Vec<f64> = (0..count).map(|i| (lo + i as f64 * step).min(hi)).collect();
    let vals: Vec<f64> = grid.iter().map(|&p| f_eval(p)).collect();
    let mut sign_changes = 0;
    let mut prev = 0i8;
    for w in vals.windows(2) {
        let s = match (w[1] - w[0]).partial_cmp(&0.0) {
            Some(Ordering::Greater) => 1,
            Some(Ordering::Less) => -1,
            _ => 0,
        };
        if s != 0 {
            if prev != 0 && s != prev {
                sign_changes += 1;
            }
            prev = s;
        }
    }
    let k = (0..count)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .expect("nonempty grid");
    let (mut a, mut b) = (grid[k.saturating_sub(1)], grid[(k + 1).min(count - 1)]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f_eval(x1), f_eval(x2));
    while b - a > 1e-12 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f_eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f_eval(x2);
        }
    }
    let p0 = (a + b) / 2.0;
    Ok(FScan {
        p0,
        f_p0: f_eval(p0),
        grid_points: count,
        sign_changes,
        f_lo: vals[0],
        f_hi: vals[count - 1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn functionals_are_the_facets() {
        for f in facet_checks(&edge_triple()) {
            assert!(f.holds, "{:?}", f.functional);
        }
    }

    #[test]
    fn vertex_maximum() {
        let verts = parallelepiped_vertices(&edge_triple());
        let target = Vector::from_ints(&[-2, 8, -2]);
        let diag = Vector::from_ints(&[4, 4, 4]);
        for p in [1.0, 1.2, 1.5, 1.9, 2.0] {
            let p = Exponent::new(p).unwrap();
            let (max, arg) = vertex_norm_argmax(&verts, p);
            assert!(arg.contains(&target), "{p}");
            let twice =
                pnorm_eval(Vector::from_ints(&[1, 1, 4]).coords(), p).mul(&Real::Exact(qi(2)));
            assert!(max.approx_eq(&twice, 1e-12));
            // The diagonal vertex only ties at p = 1.
            assert_eq!(arg.contains(&diag), p.is_one(), "{p}");
        }
    }

    #[test]
    fn endpoint_values() {
        let one = lp_parallelepiped_bound(Exponent::ONE).unwrap();
        assert!(one.gamma_bound.exactly_equals(&Real::Exact(q(9, 5))));
        assert!(one.certificate.exact);
        let two = lp_parallelepiped_bound(Exponent::TWO).unwrap();
        assert!(two.gamma_bound.exactly_equals(&Real::sqrt_of(q(342, 100))));
        assert!((two.gamma_bound.to_f64() - 1.849324).abs() < 1e-6);
        assert!(lp_parallelepiped_bound(Exponent::Finite(2.5)).is_err());
    }

    #[test]
    fn f_matches_gamma() {
        assert_eq!(f_eval(1.0), 18.0);
        assert!((f_eval(2.0) - 342f64.sqrt()).abs() < 1e-12);
        for p in [1.0001, 1.05, 1.3, 1.7] {
            let g = gamma_formula(Exponent::new(p).unwrap()).to_f64();
            assert!((f_eval(p) - 10.0 * g).abs() < 1e-10, "{p}");
        }
        let s = f_scan(1.0, 2.0, 1e-3).unwrap();
        assert!(s.unique_minimum());
        assert!((s.p0 - 1.320).abs() < 1e-3);
        assert!((s.f_p0 - 17.550).abs() < 1e-3);
    }
}
