use std::f64::consts::PI;

use super::{PartitionCertificate, PartitionPiece, Region, Scheme, Sector};
use crate::error::{Error, Result};
use crate::geometry::body::Body;
use crate::geometry::norm::{Exponent, Norm};
use crate::geometry::real::{q, Real};

pub const SECTOR_SAMPLES: usize = 2048;
pub const SAMPLE_TOLERANCE: f64 = 1e-9;

/// Largest sampled Euclidean distance within a sector. The sector is the
/// convex hull of its arc and the center, so sampling those suffices.
pub fn sector_sample_diameter(s: &Sector, samples: usize) -> f64 {
    let mut pts: Vec<[f64; 2]> = (0..=samples)
        .map(|k| {
            let a = s.from + (s.to - s.from) * k as f64 / samples as f64;
            [a.cos(), a.sin()]
        })
        .collect();
    pts.push([0.0, 0.0]);
    let mut best = 0.0f64;
    for (i, x) in pts.iter().enumerate() {
        for y in &pts[i + 1..] {
            best = best.max((x[0] - y[0]).hypot(x[1] - y[1]));
        }
    }
    best
}

/// The Euclidean unit disk cut into four closed quadrants. A quadrant's
/// diameter is the chord between its arc endpoints, `√2`, against 2 for the disk.
pub fn disk_partition4() -> Result<PartitionCertificate> {
    let pieces = (0..4)
        .map(|k| PartitionPiece::new(vec![Region::Sector(Sector::quadrant(k))], None))
        .collect::<Result<Vec<_>>>()?;
    let ratio = Real::sqrt_of(q(1, 2));
    for p in &pieces {
        let Region::Sector(s) = &p.regions[0] else {
            unreachable!()
        };
        let d = sector_sample_diameter(s, SECTOR_SAMPLES);
        if d > 2.0 * ratio.to_f64() + SAMPLE_TOLERANCE {
            return Err(Error::Degenerate(format!(
                "sampled sector diameter {d} exceeds sqrt(2)"
            )));
        }
        debug_assert!((s.to - s.from - PI / 2.0).abs() < 1e-15);
    }
    Ok(PartitionCertificate {
        scheme: Scheme::Disk,
        parent: Body::PBall {
            dim: 2,
            p: Exponent::TWO,
        },
        pieces,
        ratio,
        norm: Some(Norm::l2()),
        coverage_evidence: None,
    })
}
