use std::sync::Arc;

use itertools::Itertools;

use super::{PartitionCertificate, PartitionPiece, Region, Scheme};
use crate::error::{Error, Result};
use crate::geometry::body::Body;
use crate::geometry::polytope::{Homothet, VPolytope};
use crate::geometry::real::{q, Real};
use crate::geometry::vector::{Vector, MAX_DIM};

/// `B = ½B + ½V` for `B = [−1, 1]ⁿ` and its vertex set `V`: the 2ⁿ subcubes.
pub fn cube_partition(n: usize) -> Result<PartitionCertificate> {
    if !(1..=MAX_DIM).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let base = Arc::new(VPolytope::cube(n));
    let half = q(1, 2);
    let pieces = (0..n)
        .map(|_| [-1i64, 1])
        .multi_cartesian_product()
        .map(|v| {
            let h = Homothet::new(
                half.clone(),
                Vector::from_ints(&v).scale(&half),
                base.clone(),
            )?;
            PartitionPiece::new(vec![Region::Homothet(h.clone())], Some(h))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PartitionCertificate {
        scheme: Scheme::Cube(n),
        parent: Body::Cube { dim: n },
        pieces,
        ratio: Real::Exact(half),
        norm: None,
        coverage_evidence: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::diameter::polytope_diameter;
    use crate::geometry::norm::Norm;
    use crate::geometry::real::qi;

    #[test]
    fn subcubes() {
        let c = cube_partition(3).unwrap();
        assert_eq!(c.piece_count(), 8);
        for p in &c.pieces {
            let d = polytope_diameter(p.hull.as_ref().unwrap(), &Norm::linf()).unwrap();
            assert_eq!(d, Real::Exact(qi(1)));
        }
        let seg = cube_partition(1).unwrap();
        let halves: Vec<_> = seg
            .pieces
            .iter()
            .map(|p| p.hull.clone().unwrap().vertex_set())
            .collect();
        assert!(halves.contains(
            &[Vector::from_ints(&[-1]), Vector::from_ints(&[0])]
                .into_iter()
                .collect()
        ));
        assert!(cube_partition(0).is_err() && cube_partition(9).is_err());
    }
}
