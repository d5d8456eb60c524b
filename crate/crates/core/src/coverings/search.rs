//! Search for `m` balls of radius `r` covering a body.
//!
//! The objective is the total excess `Σₓ max(0, minⱼ ‖x − cⱼ‖ − r')` over a
//! fixed sample set, with `r'` slightly below `r` so the final centers have
//! room to be rounded to small-denominator rationals. Each start anneals
//! single-center moves and then runs a coordinate pattern search. The result
//! is confirmed on a sample set four times larger, in exact arithmetic when
//! the norm and the body are polyhedral.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sampling::BodySampler;
use super::SAMPLE_TOLERANCE;
use crate::error::{Error, Result};
use crate::geometry::body::{parse_body, parse_norm, parse_points, Body};
use crate::geometry::norm::Norm;
use crate::geometry::real::{format_q, parse_q, q_from_f64, q_to_f64, Real, Q};
use crate::geometry::vector::Vector;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub boundary_samples: usize,
    pub interior_samples: usize,
    pub starts: usize,
    pub anneal_steps: usize,
    /// Confirmation sample sets are this many times larger.
    pub confirm_factor: usize,
    /// The search aims at radius `r(1 − slack)`.
    pub slack: f64,
    /// Cutting-plane rounds after the best start.
    pub refine_rounds: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            boundary_samples: 4096,
            interior_samples: 1024,
            starts: 8,
            anneal_steps: 3000,
            confirm_factor: 4,
            slack: 1e-3,
            refine_rounds: 8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BallCoveringSolution {
    pub centers: Vec<Vector>,
    pub radius: Q,
    pub norm: Norm,
    pub seed: u64,
    /// `max over confirmation samples of (minⱼ ‖x − cⱼ‖ − r)`.
    pub residual_margin: Real,
    /// The same quantity over the search samples.
    pub search_margin: f64,
    pub confirmation_samples: usize,
    /// Whether the confirmation ran in exact rational arithmetic.
    pub exact_confirmation: bool,
    pub success: bool,
    /// Index of the start that produced the centers.
    pub start: usize,
}

struct Objective<'a> {
    samples: &'a [Vec<f64>],
    norm: &'a Norm,
    target: f64,
    /// The true radius, used when the slack target is out of reach.
    radius: f64,
}

impl Objective<'_> {
    fn distances(&self, c: &[f64]) -> Vec<f64> {
        let mut diff = vec![0.0; c.len()];
        self.samples
            .iter()
            .map(|x| {
                for ((d, a), b) in diff.iter_mut().zip(x).zip(c) {
                    *d = a - b;
                }
                self.norm.eval_f64(&diff)
            })
            .collect()
    }
}

/// Centers, their distance columns and, per sample, the nearest and
/// second-nearest distance, so replacing one center costs `O(samples)`.
struct State {
    centers: Vec<Vec<f64>>,
    dist: Vec<Vec<f64>>,
    nearest: Vec<(f64, usize)>,
    second: Vec<f64>,
    cost: f64,
}

impl State {
    fn new(obj: &Objective, centers: Vec<Vec<f64>>) -> State {
        let dist = centers.iter().map(|c| obj.distances(c)).collect();
        let mut s = State {
            centers,
            dist,
            nearest: Vec::new(),
            second: Vec::new(),
            cost: 0.0,
        };
        s.refresh(obj.target);
        s
    }

    fn refresh(&mut self, target: f64) {
        let count = self.dist[0].len();
        self.nearest.clear();
        self.second.clear();
        for i in 0..count {
            let (mut b, mut bj, mut s) = (f64::INFINITY, 0, f64::INFINITY);
            for (j, d) in self.dist.iter().enumerate() {
                if d[i] < b {
                    s = b;
                    b = d[i];
                    bj = j;
                } else if d[i] < s {
                    s = d[i];
                }
            }
            self.nearest.push((b, bj));
            self.second.push(s);
        }
        self.cost = self
            .nearest
            .iter()
            .map(|(b, _)| (b - target).max(0.0))
            .sum();
    }

    /// Cost after replacing center `j`'s column by `col`.
    fn cost_with(&self, j: usize, col: &[f64], target: f64) -> f64 {
        let mut total = 0.0;
        for (i, c) in col.iter().enumerate() {
            let (b, bj) = self.nearest[i];
            let other = if bj == j { self.second[i] } else { b };
            let v = c.min(other);
            if v > target {
                total += v - target;
            }
        }
        total
    }

    fn replace(&mut self, j: usize, center: Vec<f64>, col: Vec<f64>, target: f64) {
        self.centers[j] = center;
        self.dist[j] = col;
        self.refresh(target);
    }
}

fn margin(samples: &[Vec<f64>], norm: &Norm, centers: &[Vec<f64>], r: f64) -> f64 {
    let mut diff = vec![0.0; samples.first().map_or(0, |s| s.len())];
    samples
        .iter()
        .map(|x| {
            centers
                .iter()
                .map(|c| {
                    for ((d, a), b) in diff.iter_mut().zip(x).zip(c) {
                        *d = a - b;
                    }
                    norm.eval_f64(&diff)
                })
                .fold(f64::INFINITY, f64::min)
                - r
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

struct StartResult {
    centers: Vec<Vec<f64>>,
    cost: f64,
}

const MAX_SWEEPS: usize = 16;
const REFINE_BATCH: usize = 1024;

fn pattern_search(obj: &Objective, state: &mut State, scale: f64) {
    let n = state.centers[0].len();
    let mut h = 0.05 * scale;
    // Sweeps at the current step; capped so tiny steps cannot creep.
    let mut sweeps = 0;
    while h > 1e-8 * scale && state.cost > 0.0 {
        let mut improved = false;
        sweeps += 1;
        for j in 0..state.centers.len() {
            for axis in 0..n {
                for sign in [1.0, -1.0] {
                    let mut cand = state.centers[j].clone();
                    cand[axis] += sign * h;
                    let col = obj.distances(&cand);
                    let c = state.cost_with(j, &col, obj.target);
                    if c < state.cost {
                        state.replace(j, cand, col, obj.target);
                        improved = true;
                    }
                }
            }
        }
        if !improved || sweeps >= MAX_SWEEPS {
            h *= 0.5;
            sweeps = 0;
        }
    }
}

fn run_start(
    obj: &Objective,
    m: usize,
    scale: f64,
    opts: &SearchOptions,
    rng: &mut ChaCha8Rng,
) -> StartResult {
    let centers: Vec<Vec<f64>> = (0..m)
        .map(|_| obj.samples[rng.gen_range(0..obj.samples.len())].clone())
        .collect();
    let mut state = State::new(obj, centers);
    let mut best = (state.centers.clone(), state.cost);

    // Annealing over single-center moves.
    let t0 = 0.02 * state.cost.max(1e-12);
    for step in 0..opts.anneal_steps {
        if best.1 == 0.0 {
            break;
        }
        let frac = step as f64 / opts.anneal_steps as f64;
        let temp = t0 * (1e-4f64).powf(frac);
        let sigma = scale * 0.3 * (1e-3f64).powf(frac);
        let j = rng.gen_range(0..m);
        let cand: Vec<f64> = state.centers[j]
            .iter()
            .map(|c| c + sigma * (rng.gen::<f64>() + rng.gen::<f64>() + rng.gen::<f64>() - 1.5))
            .collect();
        let col = obj.distances(&cand);
        let c = state.cost_with(j, &col, obj.target);
        if c < state.cost || rng.gen::<f64>() < (-(c - state.cost) / temp).exp() {
            state.replace(j, cand, col, obj.target);
            if state.cost < best.1 {
                best = (state.centers.clone(), state.cost);
            }
        }
    }

    // Pattern search from the best annealed state, first at the slack
    // target, then (if needed) at the true radius: tight coverings such as
    // the cube by half-cubes have no slack at all.
    let mut state = State::new(obj, best.0);
    pattern_search(obj, &mut state, scale);
    if state.cost > 0.0 {
        let exact = Objective {
            target: obj.radius,
            ..*obj
        };
        state.refresh(exact.target);
        pattern_search(&exact, &mut state, scale);
    }
    StartResult {
        centers: state.centers,
        cost: state.cost,
    }
}

/// Rounds centers to `k/D` for the smallest listed `D` keeping the search
/// margin non-positive; falls back to the exact binary values.
fn snap(samples: &[Vec<f64>], norm: &Norm, centers: &[Vec<f64>], r: f64) -> Vec<Vector> {
    let denominators = (1..=64u64).chain((7..=20).map(|k| 1u64 << k));
    for d in denominators {
        let snapped: Vec<Vec<f64>> = centers
            .iter()
            .map(|c| {
                c.iter()
                    .map(|x| (x * d as f64).round() / d as f64)
                    .collect()
            })
            .collect();
        if margin(samples, norm, &snapped, r) <= SAMPLE_TOLERANCE {
            return centers
                .iter()
                .map(|c| {
                    Vector::new(
                        c.iter()
                            .map(|x| {
                                Q::new(((x * d as f64).round() as i64).into(), (d as i64).into())
                            })
                            .collect(),
                    )
                })
                .collect();
        }
    }
    centers
        .iter()
        .map(|c| {
            Vector::new(
                c.iter()
                    .map(|x| q_from_f64(*x).expect("finite center"))
                    .collect(),
            )
        })
        .collect()
}

fn search_samples(
    sampler: &BodySampler,
    boundary: usize,
    interior: usize,
    seed: u64,
) -> Vec<Vec<f64>> {
    let mut s = sampler.extreme_points();
    s.extend(sampler.boundary_samples(boundary, seed));
    s.extend(sampler.interior_samples(interior, seed));
    s
}

pub fn search_ball_covering(
    parent: &Body,
    m: usize,
    r: &Q,
    norm: &Norm,
    seed: u64,
    opts: &SearchOptions,
) -> Result<BallCoveringSolution> {
    if m == 0 || m > 16 {
        return Err(Error::OutOfRange(format!("ball count {m} outside 1..=16")));
    }
    if parent.dim() > 3 {
        return Err(Error::UnsupportedDimension(parent.dim()));
    }
    if r <= &Q::from_integer(0.into()) {
        return Err(Error::OutOfRange("radius must be positive".into()));
    }
    norm.check_dim(parent.dim())?;
    let sampler = BodySampler::new(parent)?;
    let samples = search_samples(&sampler, opts.boundary_samples, opts.interior_samples, seed);
    let rf = q_to_f64(r);
    let scale = samples
        .iter()
        .map(|x| norm.eval_f64(x))
        .fold(0.0, f64::max)
        .max(1e-12);
    let obj = Objective {
        samples: &samples,
        norm,
        target: rf * (1.0 - opts.slack),
        radius: rf,
    };
    let mut best: Option<(usize, StartResult)> = None;
    for start in 0..opts.starts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(start as u64 + 1);
        let res = run_start(&obj, m, scale, opts, &mut rng);
        let done = res.cost == 0.0;
        if best.as_ref().is_none_or(|(_, b)| res.cost < b.cost) {
            best = Some((start, res));
        }
        if done {
            break;
        }
    }
    let (start, res) = best.expect("at least one start");

    // Cutting-plane refinement: points of a fresh, denser sample set left
    // uncovered join the search set, and the centers are re-optimized at the
    // true radius. Tight coverings need this; a fixed sample set overfits.
    let mut samples = samples;
    let mut centers = res.centers;
    for round in 0..opts.refine_rounds {
        let probe_seed = seed.wrapping_add(0x9e37_79b9 * (round as u64 + 1));
        let mut probe = sampler.boundary_samples(opts.boundary_samples * 4, probe_seed);
        probe.extend(sampler.interior_samples(opts.interior_samples * 4, probe_seed));
        let mut violators: Vec<(f64, Vec<f64>)> = probe
            .into_iter()
            .filter_map(|x| {
                let e = margin(std::slice::from_ref(&x), norm, &centers, rf);
                (e > 0.0).then_some((e, x))
            })
            .collect();
        if violators.is_empty() {
            break;
        }
        violators.sort_by(|a, b| b.0.total_cmp(&a.0));
        samples.extend(violators.into_iter().take(REFINE_BATCH).map(|(_, x)| x));
        let obj = Objective {
            samples: &samples,
            norm,
            target: rf,
            radius: rf,
        };
        let mut state = State::new(&obj, centers);
        pattern_search(&obj, &mut state, scale);
        centers = state.centers;
    }
    let centers = snap(&samples, norm, &centers, rf);
    let mut sol = confirm_covering(parent, &centers, r, norm, seed, opts)?;
    sol.search_margin = margin(
        &samples,
        norm,
        &centers.iter().map(Vector::to_f64).collect::<Vec<_>>(),
        rf,
    );
    sol.start = start;
    sol.success = sol.success && sol.search_margin <= SAMPLE_TOLERANCE;
    Ok(sol)
}

/// Checks a covering on the confirmation sample set (`confirm_factor` times
/// the search resolution, different seed stream).
pub fn confirm_covering(
    parent: &Body,
    centers: &[Vector],
    r: &Q,
    norm: &Norm,
    seed: u64,
    opts: &SearchOptions,
) -> Result<BallCoveringSolution> {
    let sampler = BodySampler::new(parent)?;
    let f = opts.confirm_factor.max(1);
    let boundary = sampler.boundary_samples(opts.boundary_samples * f, seed ^ 0xc0f1);
    let interior = sampler.interior_samples(opts.interior_samples * f, seed ^ 0xc0f1);
    let extremes = sampler.extreme_points();
    let count = boundary.len() + interior.len() + extremes.len();
    let exact = norm.is_polyhedral() && sampler.is_polytopal();
    let residual = if exact {
        let mut pts = Vec::with_capacity(count);
        for x in extremes.iter().chain(&boundary) {
            pts.push(sampler.exact_point(x, true)?);
        }
        for x in &interior {
            pts.push(sampler.exact_point(x, false)?);
        }
        if let Some(p) = parent.as_polytope() {
            pts.splice(0..extremes.len(), p.vertices().iter().cloned());
        }
        let mut worst: Option<Q> = None;
        for x in &pts {
            let mut best: Option<Q> = None;
            for c in centers {
                let Real::Exact(d) = norm.eval(&x.sub(c))? else {
                    unreachable!("polyhedral norms are exact")
                };
                if best.as_ref().is_none_or(|b| d < *b) {
                    best = Some(d);
                }
            }
            let m = best.expect("nonempty centers") - r;
            if worst.as_ref().is_none_or(|w| m > *w) {
                worst = Some(m);
            }
        }
        Real::Exact(worst.expect("nonempty samples"))
    } else {
        let mut pts = extremes;
        pts.extend(boundary);
        pts.extend(interior);
        let cf: Vec<Vec<f64>> = centers.iter().map(Vector::to_f64).collect();
        Real::Float(margin(&pts, norm, &cf, q_to_f64(r)))
    };
    let success = residual <= Real::zero();
    Ok(BallCoveringSolution {
        centers: centers.to_vec(),
        radius: r.clone(),
        norm: norm.clone(),
        seed,
        residual_margin: residual,
        search_margin: f64::NAN,
        confirmation_samples: count,
        exact_confirmation: exact,
        success,
        start: 0,
    })
}

/// Stored search output: the seed and the rational centers it produced.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoveringFixture {
    pub body: serde_json::Value,
    pub norm: serde_json::Value,
    pub m: usize,
    pub radius: String,
    pub seed: u64,
    pub centers: Vec<Vec<String>>,
}

impl CoveringFixture {
    pub fn from_solution(
        body: serde_json::Value,
        norm: serde_json::Value,
        sol: &BallCoveringSolution,
    ) -> Self {
        CoveringFixture {
            body,
            norm,
            m: sol.centers.len(),
            radius: format_q(&sol.radius),
            seed: sol.seed,
            centers: sol
                .centers
                .iter()
                .map(|c| c.iter().map(format_q).collect())
                .collect(),
        }
    }

    pub fn parsed(&self) -> Result<(Body, Norm, Q, Vec<Vector>)> {
        let body = parse_body(&self.body)?;
        let norm = parse_norm(&self.norm)?;
        let radius = parse_q(&self.radius)
            .ok_or_else(|| Error::Parse(format!("bad radius {:?}", self.radius)))?;
        let centers = parse_points(&serde_json::to_value(&self.centers).expect("strings"))?;
        if centers.len() != self.m {
            return Err(Error::Parse("fixture center count differs from m".into()));
        }
        Ok((body, norm, radius, centers))
    }
}

pub fn load_fixture(path: &Path) -> Result<CoveringFixture> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::norm::Exponent;
    use crate::geometry::real::q;

    #[test]
    fn cube_by_eight_half_cubes() {
        let cube = Body::Cube { dim: 3 };
        let opts = SearchOptions {
            boundary_samples: 512,
            interior_samples: 256,
            ..SearchOptions::default()
        };
        let sol = search_ball_covering(&cube, 8, &q(1, 2), &Norm::linf(), 7, &opts).unwrap();
        assert!(sol.success, "{sol:?}");
        let mut got: Vec<Vector> = sol.centers.clone();
        got.sort();
        let mut want: Vec<Vector> = (0..8)
            .map(|k| {
                Vector::new(
                    (0..3)
                        .map(|i| if k >> i & 1 == 1 { q(1, 2) } else { q(-1, 2) })
                        .collect(),
                )
            })
            .collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn known_l1_covering_confirms_exactly() {
        // Six balls at ±eᵢ/3 already cover the l₁ ball at radius 2/3.
        let ball = Body::PBall {
            dim: 3,
            p: Exponent::ONE,
        };
        let mut centers = Vec::new();
        for i in 0..3 {
            for s in [1, -1] {
                let mut c = Vector::zeros(3).into_coords();
                c[i] = q(s, 3);
                centers.push(Vector::new(c));
            }
        }
        let opts = SearchOptions::default();
        let sol = confirm_covering(&ball, &centers, &q(2, 3), &Norm::l1(), 1, &opts).unwrap();
        assert!(sol.exact_confirmation);
        assert!(sol.success, "{:?}", sol.residual_margin);
        let short =
            confirm_covering(&ball, &centers[..5], &q(2, 3), &Norm::l1(), 1, &opts).unwrap();
        assert!(!short.success);
    }

    #[test]
    fn two_disks_cannot_cover() {
        let disk = Body::PBall {
            dim: 2,
            p: Exponent::TWO,
        };
        let opts = SearchOptions {
            boundary_samples: 1024,
            interior_samples: 256,
            anneal_steps: 1000,
            ..SearchOptions::default()
        };
        let sol = search_ball_covering(&disk, 2, &q(9, 10), &Norm::l2(), 3, &opts).unwrap();
        assert!(!sol.success);
        assert!(sol.residual_margin > Real::zero());
    }
}
