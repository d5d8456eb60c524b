//! Upper bounds on `β(X, m)` assembled from certified ingredients. Each
//! bound keeps the chain of steps it came from, and every step can be
//! checked again from its stored certificate.

mod minmax;

pub use minmax::{
    ball_branch, ball_branch_exact, corollary_identity, corollary_threshold_check, minmax_epsilon,
    simplex_branch, simplex_branch_exact, EpsilonOptResult,
};

use std::cmp::Ordering;

use crate::banach_mazur::{bm_upper, lp_parallelepiped_bound, SandwichCertificate, TOLERANCE};
use crate::error::{Error, Result};
use crate::geometry::norm::{Exponent, Norm};
use crate::geometry::real::{q, Real, Q};
use crate::partitions::cube_partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Evidence {
    Exact,
    GridCertified,
    Sampled,
    Cited,
}

impl Evidence {
    pub fn label(self) -> &'static str {
        match self {
            Evidence::Exact => "exact",
            Evidence::GridCertified => "grid-certified",
            Evidence::Sampled => "sampled",
            Evidence::Cited => "cited",
        }
    }
}

#[derive(Clone, Debug)]
pub enum StepCertificate {
    Sandwich(Box<SandwichCertificate>),
    /// `β(l_∞ⁿ, 2ⁿ) ≤ 1/2` from the subcube partition.
    CubePartition {
        dim: usize,
        ratio: Q,
    },
    /// `lhs ≤ rhs`.
    Inequality {
        lhs: Real,
        rhs: Real,
    },
    /// `value = factor·input`, clamped to 1.
    Product {
        factor: Real,
        input: Real,
        value: Real,
    },
    Cited(String),
}

#[derive(Clone, Debug)]
pub struct ProvenanceStep {
    pub formula: String,
    pub inputs: Vec<(String, String)>,
    pub evidence: Evidence,
    pub certificate: StepCertificate,
}

impl ProvenanceStep {
    pub fn reverify(&self) -> bool {
        match &self.certificate {
            StepCertificate::Sandwich(c) => c
                .reverify()
                .map(|r| r.verified && r.min_margin() >= -TOLERANCE)
                .unwrap_or(false),
            StepCertificate::CubePartition { dim, ratio } => cube_partition(*dim)
                .ok()
                .and_then(|c| c.enclosure_ratio())
                .is_some_and(|r| r <= *ratio),
            StepCertificate::Inequality { lhs, rhs } => lhs.cmp_real(rhs) != Ordering::Greater,
            StepCertificate::Product {
                factor,
                input,
                value,
            } => {
                let raw = factor.mul(input);
                let expect = if raw.cmp_real(&Real::one()) == Ordering::Greater {
                    Real::one()
                } else {
                    raw
                };
                expect.approx_eq(value, 1e-12)
            }
            StepCertificate::Cited(_) => true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BetaBound {
    pub space: Norm,
    pub dim: usize,
    pub m: usize,
    pub value: Real,
    pub provenance: Vec<ProvenanceStep>,
}

impl BetaBound {
    pub fn reverify(&self) -> bool {
        let in_range = self.value.cmp_real(&Real::zero()) == Ordering::Greater
            && self.value.cmp_real(&Real::one()) != Ordering::Greater;
        in_range && self.provenance.iter().all(ProvenanceStep::reverify)
    }

    /// Weakest evidence along the chain.
    pub fn evidence(&self) -> Evidence {
        self.provenance
            .iter()
            .map(|s| s.evidence)
            .max()
            .unwrap_or(Evidence::Exact)
    }
}

fn product_step(formula: &str, factor: &Real, input: &Real) -> (Real, ProvenanceStep) {
    let raw = factor.mul(input);
    let value = if raw.cmp_real(&Real::one()) == Ordering::Greater {
        Real::one()
    } else {
        raw
    };
    let evidence = if value.is_exact() {
        Evidence::Exact
    } else {
        Evidence::Sampled
    };
    let step = ProvenanceStep {
        formula: formula.into(),
        inputs: vec![
            ("gamma".into(), factor.render()),
            ("beta".into(), input.render()),
        ],
        evidence,
        certificate: StepCertificate::Product {
            factor: factor.clone(),
            input: input.clone(),
            value: value.clone(),
        },
    };
    (value, step)
}

fn check_transfer(beta: &Real, gamma: &Real) -> Result<()> {
    if gamma.cmp_real(&Real::one()) == Ordering::Less {
        return Err(Error::OutOfRange(format!(
            "gamma = {} below 1",
            gamma.render()
        )));
    }
    let b = beta.to_f64();
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::OutOfRange(format!(
            "beta = {} outside (0, 1]",
            beta.render()
        )));
    }
    Ok(())
}

/// `K ⊆ L ⊆ γK + c ⇒ β_X(L, m) ≤ γ β_X(K, m)`, clamped to 1.
pub fn homothety_transfer(beta_k: &Real, gamma: &Real) -> Result<(Real, ProvenanceStep)> {
    check_transfer(beta_k, gamma)?;
    Ok(product_step(
        "beta(L,m) <= gamma * beta(K,m)",
        gamma,
        beta_k,
    ))
}

/// `d_BM^M(X, Y) ≤ γ ⇒ β(X, m) ≤ γ β(Y, m)`, clamped to 1.
pub fn stability_transfer(beta_y: &Real, gamma: &Real) -> Result<(Real, ProvenanceStep)> {
    check_transfer(beta_y, gamma)?;
    Ok(product_step(
        "beta(X,m) <= gamma * beta(Y,m)",
        gamma,
        beta_y,
    ))
}

/// `√342/10`, the uniform bound on `γ(p)` over `[1, 2]`.
pub fn parallelepiped_cap() -> Real {
    Real::sqrt_of(q(342, 100))
}

fn cube_step() -> Result<(Real, ProvenanceStep)> {
    let cert = cube_partition(3)?;
    let ratio = cert
        .enclosure_ratio()
        .ok_or_else(|| Error::VerificationFailed("cube pieces lack enclosures".into()))?;
    Ok((
        Real::Exact(ratio.clone()),
        ProvenanceStep {
            formula: "beta(l_inf^3, 8) <= 1/2 (subcube partition)".into(),
            inputs: vec![("n".into(), "3".into())],
            evidence: Evidence::Exact,
            certificate: StepCertificate::CubePartition { dim: 3, ratio },
        },
    ))
}

/// `β(l_p³, 8)`: `√342/20` on `[1, 2)`, `3^{1/p}/2` on `[2, ∞]`.
pub fn lp_beta8(p: Exponent) -> Result<BetaBound> {
    let (half, mut steps) = {
        let (v, s) = cube_step()?;
        (v, vec![s])
    };
    let gamma = if p.is_infinite() || p.value() >= 2.0 {
        let bm = bm_upper(p)?;
        if !bm.certificate.verified {
            return Err(Error::VerificationFailed(format!(
                "cube sandwich at p = {p}"
            )));
        }
        steps.push(ProvenanceStep {
            formula: "d_BM(l_p^3, l_inf^3) = 3^(1/p), p >= 2".into(),
            inputs: vec![("p".into(), p.render())],
            evidence: Evidence::Cited,
            certificate: StepCertificate::Cited(
                "equality for p >= 2 is a known result; the upper bound below is checked".into(),
            ),
        });
        steps.push(sandwich_step(&bm.certificate, p));
        bm.gamma_bound
    } else {
        let bm = lp_parallelepiped_bound(p)?;
        steps.push(sandwich_step(&bm.certificate, p));
        let cap = parallelepiped_cap();
        steps.push(ProvenanceStep {
            formula: "gamma(p) <= sqrt(342)/10".into(),
            inputs: vec![("gamma(p)".into(), bm.gamma_bound.render())],
            evidence: if bm.gamma_bound.is_exact() {
                Evidence::Exact
            } else {
                Evidence::Sampled
            },
            certificate: StepCertificate::Inequality {
                lhs: bm.gamma_bound.clone(),
                rhs: cap.clone(),
            },
        });
        cap
    };
    let (value, step) = stability_transfer(&half, &gamma)?;
    steps.push(step);
    Ok(BetaBound {
        space: Norm::P(p),
        dim: 3,
        m: 8,
        value,
        provenance: steps,
    })
}

fn sandwich_step(cert: &SandwichCertificate, p: Exponent) -> ProvenanceStep {
    ProvenanceStep {
        formula: "s*K subset B_p^3 subset gamma*s*K".into(),
        inputs: vec![
            ("p".into(), p.render()),
            ("gamma".into(), cert.gamma.render()),
            ("scale".into(), cert.inner_scale.render()),
        ],
        evidence: if cert.exact {
            Evidence::Exact
        } else {
            Evidence::Sampled
        },
        certificate: StepCertificate::Sandwich(Box::new(cert.clone())),
    }
}

pub fn lp_beta8_table(p_values: &[Exponent]) -> Result<Vec<BetaBound>> {
    p_values.iter().map(|&p| lp_beta8(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::real::qi;

    #[test]
    fn clamp_and_identity() {
        let (v, _) = homothety_transfer(&Real::Exact(q(9, 16)), &Real::one()).unwrap();
        assert!(v.exactly_equals(&Real::Exact(q(9, 16))));
        let (v, _) = homothety_transfer(&Real::Exact(q(3, 4)), &Real::Exact(qi(2))).unwrap();
        assert!(v.exactly_equals(&Real::one()));
        assert!(stability_transfer(&Real::one(), &Real::Exact(q(1, 2))).is_err());
    }

    #[test]
    fn corollary_gamma() {
        let eps = q(7, 57);
        let gamma = qi(1) + qi(4) * &eps / (qi(1) - qi(3) * &eps);
        assert_eq!(gamma, qi(1) + q(28, 36));
        let (v, step) = homothety_transfer(&Real::Exact(q(9, 16)), &Real::Exact(gamma)).unwrap();
        assert!(v.exactly_equals(&Real::one()));
        assert!(step.reverify());
    }

    #[test]
    fn table_values() {
        let t = lp_beta8_table(&[Exponent::ONE, Exponent::TWO, Exponent::Infinity]).unwrap();
        assert!(t[0].value.exactly_equals(&Real::sqrt_of(q(342, 400))));
        assert!((t[0].value.to_f64() - 0.924662).abs() < 1e-6);
        assert!(t[1].value.exactly_equals(&Real::sqrt_of(q(3, 4))));
        assert!(t[2].value.exactly_equals(&Real::Exact(q(1, 2))));
        for b in &t {
            assert!(b.reverify());
        }
        assert_eq!(t[1].evidence(), Evidence::Cited);
    }
}
