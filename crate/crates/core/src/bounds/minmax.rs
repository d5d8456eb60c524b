//! `min_{ε∈(0,1/3)} max{(1 + 4ε/(1−3ε))η, 2(3−ε)/(4−ε)·β}`.
//!
//! The first branch `η(1+ε)/(1−3ε)` increases from `η` to `∞`, the second
//! decreases from `3β/2` to `16β/11`. Equating them gives
//! `(η+6β)ε² − (3η+20β)ε + (6β−4η) = 0`, which is positive at `0` exactly
//! when `η < 3β/2` and equals `−44η/9 < 0` at `1/3`; so the smaller root is
//! the optimum when `η < 3β/2`, and otherwise the infimum is the limit `η`
//! at `ε → 0⁺`.

use crate::error::{Error, Result};
use crate::geometry::real::{exact_sqrt, q, qi, Real, Q};

#[derive(Clone, Debug)]
pub struct EpsilonOptResult {
    pub eps_star: Real,
    pub bound: Real,
    /// `(simplex branch, ball branch)` at `eps_star`.
    pub branch_values: (Real, Real),
    /// The optimum is the open-interval limit `ε → 0⁺`, not attained.
    pub boundary_limit: bool,
    /// Golden-section cross-check.
    pub golden_eps: f64,
    pub golden_bound: f64,
}

pub fn simplex_branch(eta: f64, eps: f64) -> f64 {
    eta * (1.0 + eps) / (1.0 - 3.0 * eps)
}

pub fn ball_branch(beta: f64, eps: f64) -> f64 {
    2.0 * beta * (3.0 - eps) / (4.0 - eps)
}

pub fn simplex_branch_exact(eta: &Q, eps: &Q) -> Q {
    eta * (qi(1) + eps) / (qi(1) - qi(3) * eps)
}

pub fn ball_branch_exact(beta: &Q, eps: &Q) -> Q {
    qi(2) * beta * (qi(3) - eps) / (qi(4) - eps)
}

fn golden(eta: f64, beta: f64) -> (f64, f64) {
    let obj = |e: f64| simplex_branch(eta, e).max(ball_branch(beta, e));
    let (mut a, mut b) = (0.0f64, 1.0 / 3.0);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (obj(x1), obj(x2));
    while b - a > 1e-12 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = obj(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = obj(x2);
        }
    }
    let e = (a + b) / 2.0;
    (e, obj(e))
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("{name} = {x} outside (0, 1]")))
    }
}

/// Exact when both inputs are rational and the discriminant is a rational
/// square; floating point otherwise.
pub fn minmax_epsilon(eta: &Real, beta_ball: &Real) -> Result<EpsilonOptResult> {
    let (ef, bf) = (eta.to_f64(), beta_ball.to_f64());
    check_unit("eta", ef)?;
    check_unit("beta_ball", bf)?;
    let (golden_eps, golden_bound) = golden(ef, bf);
    if let (Real::Exact(e), Real::Exact(b)) = (eta, beta_ball) {
        if e * qi(2) >= b * qi(3) {
            return Ok(limit_result(
                eta.clone(),
                beta_ball,
                golden_eps,
                golden_bound,
            ));
        }
        let a2 = e + qi(6) * b;
        let a1 = qi(3) * e + qi(20) * b;
        let a0 = qi(6) * b - qi(4) * e;
        let disc = &a1 * &a1 - qi(4) * &a2 * &a0;
        if let Some(root) = exact_sqrt(&disc) {
            let eps = (&a1 - root) / (qi(2) * &a2);
            let s = simplex_branch_exact(e, &eps);
            let t = ball_branch_exact(b, &eps);
            debug_assert_eq!(s, t);
            return Ok(EpsilonOptResult {
                eps_star: Real::Exact(eps),
                bound: Real::Exact(s.clone()),
                branch_values: (Real::Exact(s), Real::Exact(t)),
                boundary_limit: false,
                golden_eps,
                golden_bound,
            });
        }
    }
    if 2.0 * ef >= 3.0 * bf {
        return Ok(limit_result(
            eta.clone(),
            beta_ball,
            golden_eps,
            golden_bound,
        ));
    }
    let a2 = ef + 6.0 * bf;
    let a1 = 3.0 * ef + 20.0 * bf;
    let a0 = 6.0 * bf - 4.0 * ef;
    // Smaller root in the cancellation-free form 2c/(b + √disc).
    let eps = 2.0 * a0 / (a1 + (a1 * a1 - 4.0 * a2 * a0).sqrt());
    let s = simplex_branch(ef, eps);
    let t = ball_branch(bf, eps);
    Ok(EpsilonOptResult {
        eps_star: Real::Float(eps),
        bound: Real::Float(s.max(t)),
        branch_values: (Real::Float(s), Real::Float(t)),
        boundary_limit: false,
        golden_eps,
        golden_bound,
    })
}

fn limit_result(eta: Real, beta: &Real, golden_eps: f64, golden_bound: f64) -> EpsilonOptResult {
    let ball = match beta {
        Real::Exact(b) => Real::Exact(b * q(3, 2)),
        other => Real::Float(1.5 * other.to_f64()),
    };
    EpsilonOptResult {
        eps_star: Real::zero(),
        bound: eta.clone(),
        branch_values: (eta, ball),
        boundary_limit: true,
        golden_eps,
        golden_bound,
    }
}

/// `2(3−ε)/(4−ε)·β = 1` at `ε = 7/57` for `β = 221/328`, where the simplex
/// branch with `η = 9/16` also equals 1; plus the rewrite `2 − 2/(4−ε)`.
pub fn corollary_identity(beta: &Q, eps: &Q) -> bool {
    let ball = ball_branch_exact(beta, eps);
    let rewrite = (qi(2) - qi(2) / (qi(4) - eps)) * beta;
    ball == qi(1) && rewrite == ball && simplex_branch_exact(&q(9, 16), eps) == qi(1)
}

pub fn corollary_threshold_check() -> bool {
    corollary_identity(&q(221, 328), &q(7, 57))
}
