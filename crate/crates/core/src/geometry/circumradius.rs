//! Circumradius: the least `R` such that a translate of the unit ball scaled
//! by `R` contains the body, i.e. `min_c max_v ‖v − c‖`.
//!
//! Polyhedral norms give a linear program solved exactly over `Q`, with the
//! dual solution checked as an optimality certificate. Smooth `l_p` norms use
//! a trust-region method on the linearized minimax (each step is a small
//! float LP built from the gradients of the active distance functions), with
//! deterministic restarts and a linearization lower bound at the end.

use num_traits::{One, Zero};

use super::lp::{LinearProgram, LpOutcome, Relation};
use super::norm::{Exponent, Norm};
use super::polytope::VPolytope;
use super::real::{Real, Q};
use super::vector::Vector;
use crate::error::{Error, Result};

pub const RELATIVE_TOLERANCE: f64 = 1e-9;
const STEP_TOLERANCE: f64 = 1e-10;
const MAX_ITERATIONS: usize = 100_000;
const RESTARTS: usize = 8;
const POLISH_ROUNDS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CircumradiusMethod {
    /// Exact LP with a verified dual certificate.
    ExactLp,
    /// Trust-region sequential LP (float).
    TrustRegion,
}

#[derive(Clone, Debug)]
pub struct Circumradius {
    pub radius: Real,
    pub center: Vec<f64>,
    /// Present for polyhedral norms.
    pub exact_center: Option<Vector>,
    /// Certified lower bound on the true circumradius.
    pub lower_bound: Real,
    pub method: CircumradiusMethod,
    pub iterations: usize,
}

impl Circumradius {
    /// Relative gap between the attained radius and the certified lower bound.
    pub fn relative_gap(&self) -> f64 {
        let r = self.radius.to_f64();
        if r == 0.0 {
            0.0
        } else {
            (r - self.lower_bound.to_f64()) / r
        }
    }
}

pub fn circumradius(p: &VPolytope, norm: &Norm) -> Result<Circumradius> {
    p.require_full_dimensional()?;
    norm.check_dim(p.dim())?;
    if norm.is_polyhedral() {
        polyhedral(p, norm)
    } else {
        let Some(Exponent::Finite(e)) = norm.exponent() else {
            unreachable!("non-polyhedral norms are finite l_p")
        };
        smooth(p, e)
    }
}

fn polyhedral(p: &VPolytope, norm: &Norm) -> Result<Circumradius> {
    let n = p.dim();
    let verts: Vec<Vector> = p.vertex_set().into_iter().collect();
    let zero = || Q::zero();
    let one = || Q::one();

    let (lp, total) = match norm {
        Norm::P(e) if e.is_infinite() => {
            let total = n + 1;
            let mut obj = vec![zero(); total];
            obj[n] = one();
            let mut lp = LinearProgram::minimize(obj);
            for j in 0..n {
                lp.set_free(j);
            }
            for v in &verts {
                for j in 0..n {
                    // v_j - c_j ≤ r  and  c_j - v_j ≤ r
                    let mut a = vec![zero(); total];
                    a[j] = -one();
                    a[n] = -one();
                    lp.add(a, Relation::Le, -v[j].clone());
                    let mut b = vec![zero(); total];
                    b[j] = one();
                    b[n] = -one();
                    lp.add(b, Relation::Le, v[j].clone());
                }
            }
            (lp, total)
        }
        Norm::P(_) => {
            // l₁: t_vj ≥ |v_j − c_j|, Σ_j t_vj ≤ r.
            let total = n + 1 + verts.len() * n;
            let mut obj = vec![zero(); total];
            obj[n] = one();
            let mut lp = LinearProgram::minimize(obj);
            for j in 0..n {
                lp.set_free(j);
            }
            for (i, v) in verts.iter().enumerate() {
                let t0 = n + 1 + i * n;
                for j in 0..n {
                    let mut a = vec![zero(); total];
                    a[j] = -one();
                    a[t0 + j] = -one();
                    lp.add(a, Relation::Le, -v[j].clone());
                    let mut b = vec![zero(); total];
                    b[j] = one();
                    b[t0 + j] = -one();
                    lp.add(b, Relation::Le, v[j].clone());
                }
                let mut s = vec![zero(); total];
                for j in 0..n {
                    s[t0 + j] = one();
                }
                s[n] = -one();
                lp.add(s, Relation::Le, zero());
            }
            (lp, total)
        }
        Norm::Gauge(g) => {
            // a_k · (v − c) ≤ r for every facet normal a_k.
            let total = n + 1;
            let mut obj = vec![zero(); total];
            obj[n] = one();
            let mut lp = LinearProgram::minimize(obj);
            for j in 0..n {
                lp.set_free(j);
            }
            for v in &verts {
                for a in g.facet_normals() {
                    let mut row: Vec<Q> = a.iter().map(|x| -x).collect();
                    row.push(-one());
                    lp.add(row, Relation::Le, -a.dot(v));
                }
            }
            (lp, total)
        }
    };
    debug_assert_eq!(lp.num_vars(), total);
    let sol = match lp.solve() {
        LpOutcome::Optimal(s) => s,
        _ => return Err(Error::Lp("for the circumradius has no optimum")),
    };
    if !sol.certify(&lp) {
        return Err(Error::Lp("dual certificate failed for the circumradius"));
    }
    let center = Vector::new(sol.x[..n].to_vec());
    let radius = sol.x[n].clone();
    for v in &verts {
        let d = norm.eval(&v.sub(&center))?;
        if d > Real::Exact(radius.clone()) {
            return Err(Error::Lp("circumradius center does not cover a vertex"));
        }
    }
    Ok(Circumradius {
        radius: Real::Exact(radius.clone()),
        center: center.to_f64(),
        exact_center: Some(center),
        lower_bound: Real::Exact(radius),
        method: CircumradiusMethod::ExactLp,
        iterations: 0,
    })
}

struct Minimax<'a> {
    verts: &'a [Vec<f64>],
    p: f64,
}

impl Minimax<'_> {
    fn values(&self, c: &[f64]) -> Vec<f64> {
        let e = Exponent::Finite(self.p);
        self.verts
            .iter()
            .map(|v| {
                let y: Vec<f64> = v.iter().zip(c).map(|(a, b)| a - b).collect();
                super::norm::pnorm_f64(&y, e)
            })
            .collect()
    }

    fn max(&self, c: &[f64]) -> f64 {
        self.values(c).into_iter().fold(0.0, f64::max)
    }

    /// Gradient of `c ↦ ‖v − c‖_p`.
    fn gradient(&self, v: &[f64], c: &[f64], value: f64) -> Vec<f64> {
        if value == 0.0 {
            return vec![0.0; c.len()];
        }
        v.iter()
            .zip(c)
            .map(|(a, b)| {
                let y = a - b;
                -y.signum() * (y.abs() / value).powf(self.p - 1.0)
            })
            .collect()
    }

    /// Minimizes the linear model `max_i gᵢ + aᵢ·(Δu)` over `|u|∞ ≤ 1`.
    /// Returns `(u, predicted value)`.
    fn model_step(&self, c: &[f64], f: f64, delta: f64) -> Option<(Vec<f64>, f64)> {
        let n = c.len();
        let g = self.values(c);
        // Variables: u (n, free), s (free). Value = f + Δ s.
        let mut obj = vec![0.0; n + 1];
        obj[n] = 1.0;
        let mut lp = LinearProgram::minimize(obj);
        for j in 0..=n {
            lp.set_free(j);
        }
        for (v, gi) in self.verts.iter().zip(&g) {
            let a = self.gradient(v, c, *gi);
            let mut row = a;
            row.push(-1.0);
            lp.add(row, Relation::Le, (f - gi) / delta);
        }
        for j in 0..n {
            let mut r = vec![0.0; n + 1];
            r[j] = 1.0;
            lp.add(r.clone(), Relation::Le, 1.0);
            r[j] = -1.0;
            lp.add(r, Relation::Le, 1.0);
        }
        let sol = lp.solve().optimal()?;
        let s = sol.x[n];
        Some((sol.x[..n].to_vec(), f + delta * s))
    }

    /// Kelley bound: the linearizations of every distance at `center` and at
    /// nearby probes all under-estimate the objective, so the minimum of
    /// their maximum over the box `|c − center|∞ ≤ width` is at most `R`.
    /// Probes on both sides of the optimum keep the bound second order in
    /// the probe spacing.
    ///
    /// The float LP only proposes weights; the bound itself is the weak-duality
    /// value `Σ wₖbₖ − width·‖Σ wₖaₖ‖₁` of those weights, valid for any `w`
    /// in the simplex.
    /// Also returns the LP's minimizing step, a better center when the
    /// trust region stalled.
    fn lower_bound(&self, center: &[f64], radius: f64, width: f64, scale: f64) -> (f64, Vec<f64>) {
        let n = center.len();
        let mut probes = vec![center.to_vec()];
        for h in [1e-3, 1e-5, 1e-7] {
            for j in 0..n {
                for sign in [-1.0, 1.0] {
                    let mut z = center.to_vec();
                    z[j] += sign * h * scale;
                    probes.push(z);
                }
            }
        }
        // Cut k: fₖ(center + y) ≥ bₖ + aₖ·y.
        let mut cuts: Vec<(Vec<f64>, f64)> = Vec::new();
        for z in &probes {
            for (v, gi) in self.verts.iter().zip(self.values(z)) {
                let a = self.gradient(v, z, gi);
                let b = gi
                    + a.iter()
                        .zip(center.iter().zip(z))
                        .map(|(ak, (c, zk))| ak * (c - zk))
                        .sum::<f64>();
                cuts.push((a, b));
            }
        }
        // Variables: y (n, free), s = max − radius (free), so every
        // right-hand side `radius − bₖ` is nonnegative up to rounding.
        let mut obj = vec![0.0; n + 1];
        obj[n] = 1.0;
        let mut lp = LinearProgram::minimize(obj);
        for j in 0..=n {
            lp.set_free(j);
        }
        for (a, b) in &cuts {
            let mut row = a.clone();
            row.push(-1.0);
            lp.add(row, Relation::Le, radius - b);
        }
        for j in 0..n {
            let mut r = vec![0.0; n + 1];
            r[j] = 1.0;
            lp.add(r.clone(), Relation::Le, width);
            r[j] = -1.0;
            lp.add(r, Relation::Le, width);
        }
        let Some(sol) = lp.solve().optimal() else {
            return (0.0, vec![0.0; n]);
        };
        let step = sol.x[..n].to_vec();
        let w: Vec<f64> = sol.duals[..cuts.len()].iter().map(|d| d.abs()).collect();
        let total: f64 = w.iter().sum();
        if total <= 0.0 {
            return (0.0, step);
        }
        let mut w: Vec<f64> = w.iter().map(|x| x / total).collect();
        if let Some(polished) = balance_weights(&w, &cuts) {
            w = polished;
        }
        let mut slope = vec![0.0; n];
        let mut value = 0.0;
        for (&wk, (a, b)) in w.iter().zip(&cuts) {
            value += wk * b;
            for (s, ak) in slope.iter_mut().zip(a) {
                *s += wk * ak;
            }
        }
        let bound = value - width * slope.iter().map(|x| x.abs()).sum::<f64>();
        (bound.max(0.0), step)
    }

    fn descend(&self, start: Vec<f64>, scale: f64) -> (Vec<f64>, f64, usize) {
        let mut c = start;
        let mut f = self.max(&c);
        let mut delta = 0.25 * scale;
        let mut it = 0;
        while it < MAX_ITERATIONS && delta > STEP_TOLERANCE * scale {
            it += 1;
            let Some((u, predicted)) = self.model_step(&c, f, delta) else {
                delta *= 0.25;
                continue;
            };
            let pred = f - predicted;
            if pred <= 1e-15 * f {
                // Linear model sees no descent: shrink to confirm stationarity.
                delta *= 0.25;
                continue;
            }
            let cand: Vec<f64> = c.iter().zip(&u).map(|(a, b)| a + delta * b).collect();
            let fc = self.max(&cand);
            let rho = (f - fc) / pred;
            if rho > 0.1 {
                let full = u.iter().any(|x| x.abs() > 0.9);
                c = cand;
                f = fc;
                if rho > 0.75 && full {
                    delta *= 2.0;
                }
            } else {
                delta *= 0.25;
            }
        }
        (c, f, it)
    }
}

/// Projects the LP's weights onto `{Σ wₖaₖ = 0, Σ wₖ = 1}` within their
/// support. The float LP leaves a residual slope that the box width
/// amplifies; the projected weights are used only if they stay nonnegative.
fn balance_weights(w: &[f64], cuts: &[(Vec<f64>, f64)]) -> Option<Vec<f64>> {
    let max = w.iter().cloned().fold(0.0, f64::max);
    let support: Vec<usize> = (0..w.len()).filter(|&k| w[k] > 1e-12 * max).collect();
    let n = cuts.first()?.0.len();
    // Rows of A: the n gradient coordinates, then the all-ones row.
    let entry = |row: usize, k: usize| if row < n { cuts[k].0[row] } else { 1.0 };
    let residual: Vec<f64> = (0..=n)
        .map(|row| {
            let target = if row < n { 0.0 } else { 1.0 };
            target - support.iter().map(|&k| entry(row, k) * w[k]).sum::<f64>()
        })
        .collect();
    let gram: Vec<Vec<f64>> = (0..=n)
        .map(|r1| {
            (0..=n)
                .map(|r2| support.iter().map(|&k| entry(r1, k) * entry(r2, k)).sum())
                .collect()
        })
        .collect();
    let z = super::linalg::solve(&gram, &residual)?;
    let mut out = w.to_vec();
    for &k in &support {
        out[k] += (0..=n).map(|row| entry(row, k) * z[row]).sum::<f64>();
        if out[k] < 0.0 {
            return None;
        }
    }
    Some(out)
}

fn smooth(p: &VPolytope, exponent: f64) -> Result<Circumradius> {
    let verts: Vec<Vec<f64>> = p.vertex_set().into_iter().map(|v| v.to_f64()).collect();
    let n = p.dim();
    let centroid: Vec<f64> = (0..n)
        .map(|j| verts.iter().map(|v| v[j]).sum::<f64>() / verts.len() as f64)
        .collect();
    let scale = verts
        .iter()
        .map(|v| {
            v.iter()
                .zip(&centroid)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let problem = Minimax {
        verts: &verts,
        p: exponent,
    };

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut iterations = 0;
    for k in 0..RESTARTS {
        let start: Vec<f64> = if k == 0 {
            centroid.clone()
        } else {
            let v = &verts[(k - 1) % verts.len()];
            centroid
                .iter()
                .zip(v)
                .map(|(c, x)| c + 0.5 * (x - c))
                .collect()
        };
        let (c, f, it) = problem.descend(start, scale);
        iterations += it;
        if best.as_ref().is_none_or(|(_, bf)| f < *bf) {
            best = Some((c, f));
        }
    }
    let (mut center, mut radius) = best.expect("at least one restart");

    // Lower bound: every optimal center c* has |c* − v|∞ ≤ ‖c* − v‖_p ≤ R for
    // each vertex, so the box of half-width R + |c − v₀|∞ around c contains c*;
    // the linearizations of each convex distance under-estimate it there.
    // While the gap is open, the cutting-plane step doubles as a polish.
    let mut lower = 0.0;
    for _ in 0..POLISH_ROUNDS {
        let width = radius
            + verts[0]
                .iter()
                .zip(&center)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
        let (lb, step) = problem.lower_bound(&center, radius, width, scale);
        lower = f64::max(lower, lb);
        if radius - lower <= 0.1 * RELATIVE_TOLERANCE * radius {
            break;
        }
        let cand: Vec<f64> = center.iter().zip(&step).map(|(c, y)| c + y).collect();
        let fc = problem.max(&cand);
        if fc >= radius {
            break;
        }
        center = cand;
        radius = fc;
    }
    // `lower` lives in float arithmetic; shave the rounding slack.
    let lower = (lower - 1e-13 * radius).max(0.0);
    let out = Circumradius {
        radius: Real::Float(radius),
        center,
        exact_center: None,
        lower_bound: Real::Float(lower),
        method: CircumradiusMethod::TrustRegion,
        iterations,
    };
    if out.relative_gap() > RELATIVE_TOLERANCE {
        return Err(Error::NonConvergence(
            "circumradius",
            format!(
                "radius {} with certified lower bound {} (relative gap {:.3e}) at {:?}",
                radius,
                lower,
                out.relative_gap(),
                out.center
            ),
        ));
    }
    Ok(out)
}

/// `R / diam`, the quantity entering `s(K) = (R/d)/(1 − R/d)` for complete bodies.
pub fn radius_ratio(p: &VPolytope, norm: &Norm) -> Result<Real> {
    let r = circumradius(p, norm)?;
    let d = super::diameter::polytope_diameter(p, norm)?;
    r.radius
        .div(&d)
        .ok_or_else(|| Error::Degenerate("zero diameter".into()))
}

/// `(R/d) / (1 − R/d)` computed exactly when `R/d` is rational.
pub fn symmetry_from_radius_ratio(ratio: &Real) -> Real {
    match ratio {
        Real::Exact(t) => Real::Exact(t / (Q::one() - t)),
        other => {
            let t = other.to_f64();
            Real::Float(t / (1.0 - t))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polytope::Simplex;
    use crate::geometry::real::{q, qi};

    #[test]
    fn cube_under_max_norm() {
        let r = circumradius(&VPolytope::cube(3), &Norm::linf()).unwrap();
        assert_eq!(r.radius, Real::Exact(qi(1)));
        assert!(r.exact_center.unwrap().is_zero());
    }

    #[test]
    fn regular_tetrahedron_euclidean() {
        // Edge 2√2 here, so R = 2√2 · √(3/8) = √3.
        let t = Simplex::regular_tetrahedron().to_polytope();
        let r = circumradius(&t, &Norm::l2()).unwrap();
        assert!((r.radius.to_f64() - 3f64.sqrt()).abs() < 1e-9 * 3f64.sqrt());
        assert!(r.relative_gap() <= RELATIVE_TOLERANCE);
        let ratio = r.radius.to_f64() / (2.0 * 2f64.sqrt());
        assert!((ratio - (3.0f64 / 8.0).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn cross_polytope_l1() {
        let r = circumradius(&VPolytope::cross_polytope(3), &Norm::l1()).unwrap();
        assert_eq!(r.radius, Real::Exact(qi(1)));
    }

    #[test]
    fn complete_cube_relation() {
        let c = VPolytope::cube(3);
        let ratio = radius_ratio(&c, &Norm::linf()).unwrap();
        assert_eq!(ratio, Real::Exact(q(1, 2)));
        assert_eq!(symmetry_from_radius_ratio(&ratio), Real::Exact(qi(1)));
    }

    #[test]
    fn flat_body_rejected() {
        let flat = VPolytope::new(vec![
            Vector::from_ints(&[0, 0, 0]),
            Vector::from_ints(&[1, 0, 0]),
            Vector::from_ints(&[0, 1, 0]),
        ])
        .unwrap();
        assert!(matches!(
            circumradius(&flat, &Norm::l2()),
            Err(Error::Degenerate(_))
        ));
    }
}
