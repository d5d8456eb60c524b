//! Constructive partitions with certified diameter ratios.
//!
//! Every polytopal piece carries an *enclosure*: a homothet `ρK + c` of the
//! parent `K` that contains it. Since `diam(ρK + c) = |ρ| diam K` in every
//! norm, `|ρ|` bounds the piece's relative diameter independently of the
//! norm. Pieces may overlap; only their union has to be the parent.

mod cube;
mod disk;
mod simplex;

pub use cube::cube_partition;
pub use disk::{disk_partition4, sector_sample_diameter};
pub use simplex::{
    residual_enclosure, residual_region, simplex_partition, simplex_vertex_homothets,
    triangle_partition4, SimplexScheme,
};

use std::f64::consts::PI;

use crate::coverings::CoverageReport;
use crate::error::{Error, Result};
use crate::geometry::body::Body;
use crate::geometry::norm::Norm;
use crate::geometry::polytope::{enumerate_vertices, Halfspace, Homothet, Simplex, VPolytope};
use crate::geometry::real::{Real, Q};
use crate::geometry::vector::Vector;

/// `{x : lowerᵢ ≤ λᵢ(x) ≤ upperᵢ}` in the barycentric frame of a simplex.
#[derive(Clone, Debug)]
pub struct BarycentricRegion {
    pub frame: Simplex,
    pub lower: Vec<Q>,
    pub upper: Vec<Q>,
}

impl BarycentricRegion {
    pub fn halfspaces(&self) -> Vec<Halfspace> {
        self.frame
            .barycentric_box_halfspaces(&self.lower, &self.upper)
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        let l = self.frame.barycentric_coords(x)?;
        Ok(l.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (lo, hi))| lo <= v && v <= hi))
    }
}

/// Closed sector of the Euclidean unit disk between two polar angles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sector {
    pub from: f64,
    pub to: f64,
}

impl Sector {
    pub fn quadrant(k: usize) -> Sector {
        Sector {
            from: k as f64 * PI / 2.0,
            to: (k + 1) as f64 * PI / 2.0,
        }
    }

    /// Signed depth: `min(1 − |x|, distance to either bounding line)`,
    /// positive inside. Sectors are at most a half-disk wide.
    pub fn depth_f64(&self, x: &[f64]) -> f64 {
        let (s0, c0) = self.from.sin_cos();
        let (s1, c1) = self.to.sin_cos();
        let past_from = c0 * x[1] - s0 * x[0];
        let before_to = s1 * x[0] - c1 * x[1];
        (1.0 - x[0].hypot(x[1])).min(past_from).min(before_to)
    }

    pub fn contains_f64(&self, x: &[f64], tol: f64) -> bool {
        self.depth_f64(x) >= -tol
    }
}

#[derive(Clone, Debug)]
pub enum Region {
    Homothet(Homothet),
    Barycentric(BarycentricRegion),
    Sector(Sector),
}

impl Region {
    pub fn kind(&self) -> &'static str {
        match self {
            Region::Homothet(_) => "homothet",
            Region::Barycentric(_) => "barycentric",
            Region::Sector(_) => "sector",
        }
    }

    pub fn halfspaces(&self) -> Result<Vec<Halfspace>> {
        match self {
            Region::Homothet(h) => h.halfspaces(),
            Region::Barycentric(b) => Ok(b.halfspaces()),
            Region::Sector(_) => Err(Error::Unsupported("sectors have no halfspace form".into())),
        }
    }
}

/// A piece is the intersection of its regions.
#[derive(Clone, Debug)]
pub struct PartitionPiece {
    pub regions: Vec<Region>,
    /// Homothet of the parent containing the piece.
    pub enclosure: Option<Homothet>,
    pub hull: Option<VPolytope>,
}

impl PartitionPiece {
    pub fn new(regions: Vec<Region>, enclosure: Option<Homothet>) -> Result<Self> {
        let mut piece = PartitionPiece {
            regions,
            enclosure,
            hull: None,
        };
        if piece.is_polytopal() {
            piece.hull = Some(piece.realize()?);
        }
        Ok(piece)
    }

    pub fn is_polytopal(&self) -> bool {
        !self.regions.iter().any(|r| matches!(r, Region::Sector(_)))
    }

    pub fn halfspaces(&self) -> Result<Vec<Halfspace>> {
        let mut out = Vec::new();
        for r in &self.regions {
            out.extend(r.halfspaces()?);
        }
        Ok(out)
    }

    /// Certified relative diameter `|ρ|` of the enclosure.
    pub fn enclosure_ratio(&self) -> Option<Q> {
        self.enclosure.as_ref().map(|h| {
            let r = h.ratio.clone();
            if r < Q::from_integer(0.into()) {
                -r
            } else {
                r
            }
        })
    }

    /// Exact vertex set of the intersection.
    fn realize(&self) -> Result<VPolytope> {
        if let [Region::Homothet(h)] = self.regions.as_slice() {
            return Ok(h.apply());
        }
        let hs = self.halfspaces()?;
        let dim = hs
            .first()
            .map(|h| h.normal.dim())
            .ok_or_else(|| Error::Degenerate("piece without constraints".into()))?;
        let verts = enumerate_vertices(&hs, dim);
        if verts.is_empty() {
            return Err(Error::Degenerate("empty piece".into()));
        }
        VPolytope::new(verts)
    }

    pub fn contains_exact(&self, x: &Vector) -> Result<bool> {
        Ok(self.halfspaces()?.iter().all(|h| h.contains(x)))
    }

    /// Smallest normalized slack over all constraints (positive inside).
    pub fn depth_f64(&self, x: &[f64]) -> Result<f64> {
        let mut depth = f64::INFINITY;
        for r in &self.regions {
            let d = match r {
                Region::Sector(s) => s.depth_f64(x),
                other => other
                    .halfspaces()?
                    .iter()
                    .map(|h| {
                        let a = h.normal.to_f64();
                        let scale = a
                            .iter()
                            .map(|v| v.abs())
                            .fold(0.0, f64::max)
                            .max(f64::MIN_POSITIVE);
                        let lhs: f64 = a.iter().zip(x).map(|(u, v)| u * v).sum();
                        (crate::geometry::real::q_to_f64(&h.offset) - lhs) / scale
                    })
                    .fold(f64::INFINITY, f64::min),
            };
            depth = depth.min(d);
        }
        Ok(depth)
    }

    pub fn contains_f64(&self, x: &[f64], tol: f64) -> Result<bool> {
        Ok(self.depth_f64(x)? >= -tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Simplex(SimplexScheme),
    Triangle,
    Cube(usize),
    Disk,
}

impl Scheme {
    pub fn label(&self) -> String {
        match self {
            Scheme::Simplex(s) => format!("simplex-{}", s.label()),
            Scheme::Triangle => "triangle-midpoint".into(),
            Scheme::Cube(n) => format!("cube-{n}"),
            Scheme::Disk => "disk-quadrants".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PartitionCertificate {
    pub scheme: Scheme,
    pub parent: Body,
    pub pieces: Vec<PartitionPiece>,
    /// Certified bound on `max diam(piece) / diam(parent)`.
    pub ratio: Real,
    /// `None`: the ratio holds for every norm. Otherwise the one norm it is
    /// certified for.
    pub norm: Option<Norm>,
    pub coverage_evidence: Option<CoverageReport>,
}

impl PartitionCertificate {
    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// Recompute the ratio from the enclosures; `None` for sector pieces.
    pub fn enclosure_ratio(&self) -> Option<Q> {
        self.pieces
            .iter()
            .map(|p| p.enclosure_ratio())
            .collect::<Option<Vec<_>>>()?
            .into_iter()
            .max()
    }

    pub fn holds_for(&self, norm: &Norm) -> bool {
        match &self.norm {
            None => true,
            Some(n) => n.label() == norm.label(),
        }
    }
}
