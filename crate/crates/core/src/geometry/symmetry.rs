//! Minkowski asymmetry `s(P) = min{λ ≥ 1 : P − c ⊆ −λ(P − c) for some c}`.
//!
//! Containment of a V-polytope in a scaled copy of itself is linear in the
//! unknowns once written with convex weights, so the whole problem is one LP:
//! with `x = −(1 + λ)c`, every vertex needs `vᵢ + x = −Σⱼ νᵢⱼ vⱼ` with
//! `νᵢⱼ ≥ 0` and `Σⱼ νᵢⱼ = λ`.

use num_traits::{One, Zero};

use super::lp::{LinearProgram, LpOutcome, Relation};
use super::polytope::VPolytope;
use super::real::Q;
use super::vector::Vector;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Asymmetry {
    pub value: Q,
    /// A center `c` attaining the minimum.
    pub center: Vector,
}

pub fn minkowski_asymmetry(p: &VPolytope) -> Result<Asymmetry> {
    p.require_full_dimensional()?;
    let n = p.dim();
    let verts: Vec<Vector> = p.vertex_set().into_iter().collect();
    let m = verts.len();
    // Layout: x (n, free) | ν (m·m) | λ.
    let total = n + m * m + 1;
    let lam = total - 1;
    let mut obj = vec![Q::zero(); total];
    obj[lam] = Q::one();
    let mut lp = LinearProgram::minimize(obj);
    for j in 0..n {
        lp.set_free(j);
    }
    for (i, vi) in verts.iter().enumerate() {
        for k in 0..n {
            let mut row = vec![Q::zero(); total];
            row[k] = Q::one();
            for (j, vj) in verts.iter().enumerate() {
                row[n + i * m + j] = vj[k].clone();
            }
            lp.add(row, Relation::Eq, -vi[k].clone());
        }
        let mut row = vec![Q::zero(); total];
        for j in 0..m {
            row[n + i * m + j] = Q::one();
        }
        row[lam] = -Q::one();
        lp.add(row, Relation::Eq, Q::zero());
    }
    let sol = match lp.solve() {
        LpOutcome::Optimal(s) => s,
        _ => return Err(Error::Lp("for the Minkowski asymmetry has no optimum")),
    };
    if !sol.certify(&lp) {
        return Err(Error::Lp(
            "dual certificate failed for the Minkowski asymmetry",
        ));
    }
    let value = sol.x[lam].clone();
    let x = Vector::new(sol.x[..n].to_vec());
    let center = x.scale(&(-Q::one() / (&value + Q::one())));
    Ok(Asymmetry { value, center })
}

/// Verifies `P − c ⊆ −λ(P − c)` vertex by vertex with exact membership LPs.
pub fn verify_asymmetry(p: &VPolytope, a: &Asymmetry) -> Result<bool> {
    let image = p.map_homothety(&-a.value.clone(), &a.center.scale(&(Q::one() + &a.value)));
    for v in p.vertices() {
        if !super::polytope::point_in_vpolytope(&image, v, super::polytope::Arithmetic::Exact)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polytope::Simplex;
    use crate::geometry::real::qi;

    #[test]
    fn simplex_has_asymmetry_n() {
        for n in 1..=4 {
            let a = minkowski_asymmetry(&Simplex::standard(n).to_polytope()).unwrap();
            assert_eq!(a.value, qi(n as i64));
            assert!(verify_asymmetry(&Simplex::standard(n).to_polytope(), &a).unwrap());
        }
    }

    #[test]
    fn symmetric_bodies() {
        assert_eq!(
            minkowski_asymmetry(&VPolytope::cube(3)).unwrap().value,
            qi(1)
        );
        let shifted = VPolytope::cube(2).map_homothety(&qi(1), &Vector::from_ints(&[3, -1]));
        let a = minkowski_asymmetry(&shifted).unwrap();
        assert_eq!(a.value, qi(1));
        assert_eq!(a.center, Vector::from_ints(&[3, -1]));
    }

    #[test]
    fn tetrahedron_center_is_centroid() {
        let t = Simplex::regular_tetrahedron();
        let a = minkowski_asymmetry(&t.to_polytope()).unwrap();
        assert_eq!(a.value, qi(3));
        assert_eq!(a.center, t.centroid());
    }
}
