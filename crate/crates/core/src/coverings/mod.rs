//! Coverage checks for partition schemes and the ball-covering search.
//!
//! Exact-grid mode tests every point of a rational grid of granularity `1/N`
//! with integer arithmetic; it certifies the grid, not the continuum. Sampled
//! mode uses low-discrepancy and pseudo-random points with a float tolerance.

mod sampling;
mod search;

pub use sampling::{boundary_point, halton, interior_samples, BodySampler};
pub use search::{
    confirm_covering, load_fixture, search_ball_covering, BallCoveringSolution, CoveringFixture,
    SearchOptions,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::body::Body;
use crate::geometry::diameter::polytope_diameter;
use crate::geometry::norm::Norm;
use crate::geometry::polytope::Halfspace;
use crate::geometry::real::{q, q_to_f64, Real, Q};
use crate::geometry::vector::Vector;
use crate::partitions::{sector_sample_diameter, PartitionCertificate, PartitionPiece, Region};

pub const DEFAULT_GRID: usize = 64;
pub const SAMPLE_TOLERANCE: f64 = 1e-9;
/// Largest number of grid points tested by default for box parents.
pub const GRID_BUDGET: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverageMode {
    ExactGrid,
    Sampled,
}

impl CoverageMode {
    pub fn label(self) -> &'static str {
        match self {
            CoverageMode::ExactGrid => "exact_grid",
            CoverageMode::Sampled => "sampled",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WitnessPoint {
    Exact(Vector),
    Float(Vec<f64>),
}

impl WitnessPoint {
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            WitnessPoint::Exact(v) => v.to_f64(),
            WitnessPoint::Float(v) => v.clone(),
        }
    }
}

/// A grid or sample point with its depth: the largest, over pieces, of the
/// smallest normalized slack of the piece's constraints. Negative depth
/// means uncovered.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub point: WitnessPoint,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    pub mode: CoverageMode,
    /// Grid granularity `N` or sample count.
    pub resolution: usize,
    pub points_tested: usize,
    pub covered: bool,
    /// The uncovered point of least depth, or the covered point of least depth.
    pub worst_witness: Witness,
    pub tolerance: Real,
}

impl CoverageReport {
    pub fn evidence_level(&self) -> &'static str {
        match self.mode {
            CoverageMode::ExactGrid => "grid-certified",
            CoverageMode::Sampled => "sampled",
        }
    }
}

/// Halfspace `Σ kⱼ cⱼ ≤ N·b` over integer grid indices, scaled to integers.
struct IntConstraint {
    coeffs: Vec<i128>,
    rhs: i128,
    /// Converts integer slack to Euclidean-ish normalized slack.
    scale: f64,
}

struct Grid {
    /// Grid point `x = offset + (1/N) Σ kⱼ wⱼ`.
    offset: Vector,
    generators: Vec<Vector>,
    n: usize,
    /// Simplex grids constrain `Σ kⱼ = N`; box grids have `0 ≤ kⱼ ≤ N`.
    simplex: bool,
}

impl Grid {
    fn point(&self, k: &[usize]) -> Vector {
        let inv = q(1, self.n as i64);
        let mut x = self.offset.clone();
        for (w, &kj) in self.generators.iter().zip(k) {
            if kj > 0 {
                x = x.add(&w.scale(&(&inv * Q::from_integer((kj as i64).into()))));
            }
        }
        x
    }

    fn indices(&self) -> Vec<Vec<usize>> {
        let parts = self.generators.len();
        let mut out = Vec::new();
        let mut cur = vec![0usize; parts];
        if self.simplex {
            compositions(self.n, parts, 0, &mut cur, &mut out);
        } else {
            loop {
                out.push(cur.clone());
                let mut i = 0;
                loop {
                    if i == parts {
                        return out;
                    }
                    cur[i] += 1;
                    if cur[i] <= self.n {
                        break;
                    }
                    cur[i] = 0;
                    i += 1;
                }
            }
        }
        out
    }

    fn compile(&self, h: &Halfspace) -> Option<IntConstraint> {
        let c: Vec<Q> = self.generators.iter().map(|w| h.normal.dot(w)).collect();
        let b = &h.offset - h.normal.dot(&self.offset);
        let mut l = BigInt::one();
        for v in c.iter().chain(std::iter::once(&b)) {
            l = l.lcm(v.denom());
        }
        let to_int = |v: &Q| (v * Q::from_integer(l.clone())).to_integer().to_i128();
        let norm = h
            .normal
            .iter()
            .map(|a| q_to_f64(a).abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let coeffs = c.iter().map(to_int).collect::<Option<Vec<_>>>()?;
        let rhs = to_int(&b)?.checked_mul(self.n as i128)?;
        // Guard sums against overflow: |Σ kc| ≤ N Σ|c|.
        let bound = coeffs
            .iter()
            .try_fold(0i128, |acc, v| acc.checked_add(v.checked_abs()?))?
            .checked_mul(self.n as i128)?;
        bound.checked_add(rhs.checked_abs()?)?;
        Some(IntConstraint {
            coeffs,
            rhs,
            scale: 1.0 / (self.n as f64 * l.to_f64().unwrap_or(f64::INFINITY) * norm),
        })
    }
}

fn compositions(
    total: usize,
    parts: usize,
    i: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if i + 1 == parts {
        cur[i] = total;
        out.push(cur.clone());
        return;
    }
    for k in 0..=total {
        cur[i] = k;
        compositions(total - k, parts, i + 1, cur, out);
    }
}

fn grid_for(parent: &Body, n: usize) -> Result<Grid> {
    match parent {
        Body::Simplex(s) => Ok(Grid {
            offset: Vector::zeros(s.dim()),
            generators: s.vertices().to_vec(),
            n,
            simplex: true,
        }),
        other => {
            let poly = other
                .as_polytope()
                .ok_or_else(|| Error::Unsupported(format!("exact grid over a {}", other.kind())))?;
            let bounds = poly.as_box().ok_or_else(|| {
                Error::Unsupported("exact grid needs a simplex or box parent".into())
            })?;
            let dim = poly.dim();
            Ok(Grid {
                offset: Vector::new(bounds.iter().map(|(lo, _)| lo.clone()).collect()),
                generators: (0..dim)
                    .map(|i| Vector::unit(dim, i).scale(&(&bounds[i].1 - &bounds[i].0)))
                    .collect(),
                n,
                simplex: false,
            })
        }
    }
}

/// Largest even `N ≤ 64` whose box grid stays within [`GRID_BUDGET`] points.
pub fn default_box_grid(dim: usize) -> usize {
    let mut n = DEFAULT_GRID;
    while n > 2
        && (n + 1)
            .checked_pow(dim as u32)
            .is_none_or(|c| c > GRID_BUDGET)
    {
        n -= 2;
    }
    n
}

enum CompiledPiece {
    Int(Vec<IntConstraint>),
    Exact(Vec<Halfspace>),
}

/// Stops early once the depth is known to be at most `floor`: such a piece
/// cannot beat the best one found so far.
fn depth_int(cons: &[IntConstraint], k: &[usize], floor: f64) -> (bool, f64) {
    let mut inside = true;
    let mut depth = f64::INFINITY;
    for c in cons {
        let s: i128 = c.coeffs.iter().zip(k).map(|(a, &b)| a * b as i128).sum();
        let slack = c.rhs - s;
        if slack < 0 {
            inside = false;
        }
        depth = depth.min(slack as f64 * c.scale);
        if depth <= floor {
            break;
        }
    }
    (inside, depth)
}

fn depth_exact(hs: &[Halfspace], x: &Vector) -> (bool, f64) {
    let mut inside = true;
    let mut depth = f64::INFINITY;
    for h in hs {
        let s = h.slack(x);
        if s.is_negative() {
            inside = false;
        }
        let norm = h
            .normal
            .iter()
            .map(|a| q_to_f64(a).abs())
            .fold(0.0, f64::max);
        depth = depth.min(q_to_f64(&s) / norm.max(f64::MIN_POSITIVE));
    }
    (inside, depth)
}

fn worse(a: (bool, f64, usize), b: (bool, f64, usize)) -> (bool, f64, usize) {
    // Uncovered beats covered; then smaller depth; then smaller index.
    let key = |t: &(bool, f64, usize)| (t.0, t.1, t.2);
    let (ka, kb) = (key(&a), key(&b));
    if ka.0 != kb.0 {
        return if !ka.0 { a } else { b };
    }
    match ka.1.partial_cmp(&kb.1) {
        Some(std::cmp::Ordering::Less) => a,
        Some(std::cmp::Ordering::Greater) => b,
        _ => {
            if ka.2 <= kb.2 {
                a
            } else {
                b
            }
        }
    }
}

pub fn verify_covering(
    parent: &Body,
    pieces: &[PartitionPiece],
    mode: CoverageMode,
    resolution: usize,
) -> Result<CoverageReport> {
    if pieces.is_empty() {
        return Err(Error::Empty);
    }
    for p in pieces {
        for r in &p.regions {
            let dim = match r {
                Region::Homothet(h) => h.base.dim(),
                Region::Barycentric(b) => b.frame.dim(),
                Region::Sector(_) => 2,
            };
            if dim != parent.dim() {
                return Err(Error::DimensionMismatch {
                    expected: parent.dim(),
                    found: dim,
                });
            }
        }
    }
    match mode {
        CoverageMode::ExactGrid => verify_grid(parent, pieces, resolution),
        CoverageMode::Sampled => verify_sampled(parent, pieces, resolution),
    }
}

fn verify_grid(parent: &Body, pieces: &[PartitionPiece], n: usize) -> Result<CoverageReport> {
    if n == 0 {
        return Err(Error::OutOfRange(
            "grid granularity must be positive".into(),
        ));
    }
    let grid = grid_for(parent, n)?;
    let compiled = pieces
        .iter()
        .map(|p| {
            if !p.is_polytopal() {
                return Err(Error::Unsupported(
                    "exact grid coverage of non-polytopal pieces".into(),
                ));
            }
            let hs = p.halfspaces()?;
            Ok(
                match hs
                    .iter()
                    .map(|h| grid.compile(h))
                    .collect::<Option<Vec<_>>>()
                {
                    Some(c) => CompiledPiece::Int(c),
                    None => CompiledPiece::Exact(hs),
                },
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let indices = grid.indices();
    let eval = |i: usize| {
        let k = &indices[i];
        let mut best = (false, f64::NEG_INFINITY);
        let mut x_cache: Option<Vector> = None;
        for piece in &compiled {
            let (inside, depth) = match piece {
                CompiledPiece::Int(c) => depth_int(c, k, best.1),
                CompiledPiece::Exact(hs) => {
                    let x = x_cache.get_or_insert_with(|| grid.point(k));
                    depth_exact(hs, x)
                }
            };
            if inside && !best.0 || (inside == best.0 && depth > best.1) {
                best = (inside, depth);
            }
        }
        (best.0, best.1, i)
    };
    let worst = (0..indices.len())
        .into_par_iter()
        .map(eval)
        .reduce(|| (true, f64::INFINITY, usize::MAX), worse);
    let covered = worst.0;
    Ok(CoverageReport {
        mode: CoverageMode::ExactGrid,
        resolution: n,
        points_tested: indices.len(),
        covered,
        worst_witness: Witness {
            point: WitnessPoint::Exact(grid.point(&indices[worst.2])),
            margin: worst.1,
        },
        tolerance: Real::zero(),
    })
}

fn verify_sampled(
    parent: &Body,
    pieces: &[PartitionPiece],
    count: usize,
) -> Result<CoverageReport> {
    let sampler = BodySampler::new(parent)?;
    let points = sampler.mixed_samples(count, 0x5eed);
    let eval = |i: usize| -> Result<(bool, f64, usize)> {
        let mut depth = f64::NEG_INFINITY;
        for p in pieces {
            depth = depth.max(p.depth_f64(&points[i])?);
        }
        Ok((depth >= -SAMPLE_TOLERANCE, depth, i))
    };
    let results = (0..points.len())
        .into_par_iter()
        .map(eval)
        .collect::<Result<Vec<_>>>()?;
    let worst = results.iter().copied().reduce(worse).ok_or(Error::Empty)?;
    Ok(CoverageReport {
        mode: CoverageMode::Sampled,
        resolution: count,
        points_tested: points.len(),
        covered: results.iter().all(|r| r.0),
        worst_witness: Witness {
            point: WitnessPoint::Float(points[worst.2].clone()),
            margin: worst.1,
        },
        tolerance: Real::Float(SAMPLE_TOLERANCE),
    })
}

/// Re-checks a negative report's witness against every piece.
pub fn witness_is_uncovered(report: &CoverageReport, pieces: &[PartitionPiece]) -> Result<bool> {
    for p in pieces {
        let inside = match &report.worst_witness.point {
            WitnessPoint::Exact(x) if p.is_polytopal() => p.contains_exact(x)?,
            point => p.contains_f64(&point.to_f64(), SAMPLE_TOLERANCE)?,
        };
        if inside {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs the strongest available check and stores it on the certificate.
pub fn attach_coverage(cert: &mut PartitionCertificate, resolution: Option<usize>) -> Result<()> {
    let polytopal = cert.pieces.iter().all(PartitionPiece::is_polytopal);
    let report = if polytopal {
        let n = resolution.unwrap_or(match &cert.parent {
            Body::Simplex(_) => DEFAULT_GRID,
            other => default_box_grid(other.dim()),
        });
        verify_covering(&cert.parent, &cert.pieces, CoverageMode::ExactGrid, n)?
    } else {
        verify_covering(
            &cert.parent,
            &cert.pieces,
            CoverageMode::Sampled,
            resolution.unwrap_or(1 << 14),
        )?
    };
    cert.coverage_evidence = Some(report);
    Ok(())
}

/// `max diam(piece) / diam(parent)` from the realized pieces.
pub fn partition_diameter_ratio(cert: &PartitionCertificate, norm: &Norm) -> Result<Real> {
    let parent = match cert.parent.as_polytope() {
        Some(p) => polytope_diameter(&p, norm)?,
        None => match (&cert.parent, norm.exponent()) {
            (Body::PBall { p, .. }, Some(e)) if *p == e => Real::Exact(Q::from_integer(2.into())),
            _ => {
                return Err(Error::Unsupported(
                    "parent diameter of a ball under a different norm".into(),
                ))
            }
        },
    };
    let mut best = Real::zero();
    for piece in &cert.pieces {
        let d = match (&piece.hull, piece.regions.as_slice()) {
            (Some(h), _) => polytope_diameter(h, norm)?,
            (None, [Region::Sector(s)]) if norm.exponent().is_some_and(|e| e.is_two()) => {
                Real::Float(sector_sample_diameter(s, 4096))
            }
            _ => {
                return Err(Error::Unsupported(
                    "diameter of a non-polytopal piece".into(),
                ))
            }
        };
        best = best.max(d);
    }
    best.div(&parent)
        .ok_or_else(|| Error::Degenerate("parent of zero diameter".into()))
}
