mod common;

use common::*;
use diampart::geometry::circumradius::{
    circumradius, radius_ratio, symmetry_from_radius_ratio, CircumradiusMethod,
};
use diampart::geometry::diameter::diameter_finite;
use diampart::geometry::norm::{dual_exponent, pnorm_eval, pnorm_f64, Exponent, Norm};
use diampart::geometry::polytope::{BarycentricPoint, Simplex, VPolytope};
use diampart::geometry::real::{q, q_to_f64, Real, Q};
use diampart::geometry::symmetry::minkowski_asymmetry;
use diampart::geometry::vector::Vector;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn norms_with_gauge(seed: u64) -> Vec<Norm> {
    test_norms(&mut rng(seed))
}

proptest! {
    #[test]
    fn norm_axioms(x in rational_vec(3), y in rational_vec(3), a in rational(), seed in 0u64..1000) {
        for n in norms_with_gauge(seed) {
            let nx = n.eval(&x).unwrap().to_f64();
            prop_assert!(nx >= 0.0);
            prop_assert_eq!(nx == 0.0, x.iter().all(Zero::is_zero));
            let ax: Vec<Q> = x.iter().map(|c| c * &a).collect();
            let nax = n.eval(&ax).unwrap().to_f64();
            prop_assert!((nax - q_to_f64(&a.abs()) * nx).abs() <= TOL * (1.0 + nax));
            let s: Vec<Q> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            let ns = n.eval(&s).unwrap().to_f64();
            prop_assert!(ns <= nx + n.eval(&y).unwrap().to_f64() + TOL * (1.0 + ns));
        }
    }

    #[test]
    fn gauge_facets_match_lp(x in rational_vec(3), seed in 0u64..1000) {
        let Norm::Gauge(g) = random_gauge(&mut rng(seed), 3) else { unreachable!() };
        prop_assert_eq!(g.gauge_by_facets(&x), g.gauge_lp(&x));
    }

    #[test]
    fn p_monotone(x in rational_vec(4), p in 1.0f64..6.0, dp in 0.0f64..6.0) {
        let a = pnorm_eval(&x, Exponent::Finite(p)).to_f64();
        let b = pnorm_eval(&x, Exponent::Finite(p + dp)).to_f64();
        let c = pnorm_eval(&x, Exponent::Infinity).to_f64();
        prop_assert!(a >= b - TOL * (1.0 + a));
        prop_assert!(b >= c - TOL * (1.0 + b));
    }

    #[test]
    fn holder(x in rational_vec(3), y in rational_vec(3), p in exponent()) {
        let dot: Q = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let lhs = q_to_f64(&dot.abs());
        let rhs = pnorm_eval(&x, p).to_f64() * pnorm_eval(&y, dual_exponent(p)).to_f64();
        prop_assert!(lhs <= rhs + TOL * (1.0 + rhs));
    }

    #[test]
    fn exact_eval_agrees_with_float(x in rational_vec(3), p in exponent()) {
        let xf: Vec<f64> = x.iter().map(q_to_f64).collect();
        let a = pnorm_eval(&x, p).to_f64();
        prop_assert!((a - pnorm_f64(&xf, p)).abs() <= 1e-12 * (1.0 + a));
    }

    #[test]
    fn diameter_scales_exactly(
        pts in proptest::collection::vec(rational_vec(3), 2..7),
        lambda in rational(),
        c in rational_vec(3),
        seed in 0u64..1000,
    ) {
        let a: Vec<Vector> = pts.into_iter().map(Vector::new).collect();
        let shift = Vector::new(c);
        let image: Vec<Vector> = a.iter().map(|v| v.scale(&lambda).add(&shift)).collect();
        let polyhedral = [Norm::l1(), Norm::linf(), random_gauge(&mut rng(seed), 3)];
        for n in &polyhedral {
            let d = diameter_finite(&a, n).unwrap();
            let di = diameter_finite(&image, n).unwrap();
            let expected = d.mul(&Real::Exact(lambda.abs()));
            prop_assert!(di.is_exact());
            prop_assert!(di.exactly_equals(&expected), "{} vs {}", di.render(), expected.render());
        }
    }

    #[test]
    fn barycentric_round_trip(raw in proptest::collection::vec(0i64..20, 4), seed in 0u64..1000) {
        prop_assume!(raw.iter().any(|&w| w > 0));
        let total: i64 = raw.iter().sum();
        let lambdas: Vec<Q> = raw.iter().map(|&w| q(w, total)).collect();
        let point = BarycentricPoint::new(lambdas).unwrap();
        let s = random_tetrahedron(&mut rng(seed));
        let x = s.from_barycentric(point.lambdas());
        prop_assert_eq!(s.barycentric_coords(&x).unwrap(), point.lambdas().to_vec());
        prop_assert!(s.contains(&x).unwrap());
    }
}

#[test]
fn cube_is_complete_with_unit_symmetry() {
    for n in 1..=4 {
        let cube = VPolytope::cube(n);
        let s = minkowski_asymmetry(&cube).unwrap();
        assert_eq!(s.value, q(1, 1));
        let ratio = radius_ratio(&cube, &Norm::linf()).unwrap();
        assert!(
            ratio.exactly_equals(&Real::Exact(q(1, 2))),
            "n={n}: {}",
            ratio.render()
        );
        assert!(symmetry_from_radius_ratio(&ratio).exactly_equals(&Real::Exact(s.value.clone())));
    }
}

#[test]
fn simplex_asymmetry_is_dimension() {
    for n in 1..=4 {
        let s = minkowski_asymmetry(&Simplex::standard(n).to_polytope()).unwrap();
        assert_eq!(s.value, q(n as i64, 1));
    }
}

#[test]
fn circumradius_is_certified() {
    let mut g = rng(7);
    for trial in 0..12 {
        let s = random_tetrahedron(&mut g).to_polytope();
        let mut norms = test_norms(&mut g);
        norms.push(Norm::p(1.5).unwrap());
        for n in &norms {
            let c = circumradius(&s, n).unwrap();
            let r = c.radius.to_f64();
            for v in s.vertices() {
                let d: Vec<f64> = v
                    .to_f64()
                    .iter()
                    .zip(&c.center)
                    .map(|(a, b)| a - b)
                    .collect();
                assert!(
                    n.eval_f64(&d) <= r + TOL * (1.0 + r),
                    "trial {trial} {}",
                    n.label()
                );
            }
            let lb = c.lower_bound.to_f64();
            assert!(lb <= r + TOL * (1.0 + r), "{}: lb {lb} r {r}", n.label());
            if n.is_polyhedral() {
                assert_eq!(c.method, CircumradiusMethod::ExactLp);
                assert!(
                    c.radius.exactly_equals(&c.lower_bound),
                    "LP dual certifies optimality"
                );
                let center = c.exact_center.as_ref().unwrap();
                for v in s.vertices() {
                    let d = n.eval(v.sub(center).coords()).unwrap();
                    assert!(d.cmp_real(&c.radius).is_le());
                }
            } else {
                assert!(
                    c.relative_gap() <= 1e-6,
                    "{}: gap {}",
                    n.label(),
                    c.relative_gap()
                );
            }
        }
    }
}

#[test]
fn degenerate_polytopes_are_rejected() {
    let flat = VPolytope::new(vec![
        Vector::from_ints(&[0, 0, 0]),
        Vector::from_ints(&[1, 0, 0]),
        Vector::from_ints(&[0, 1, 0]),
        Vector::from_ints(&[1, 1, 0]),
    ])
    .unwrap();
    assert!(circumradius(&flat, &Norm::l2()).is_err());
    assert!(minkowski_asymmetry(&flat).is_err());
    let d = diameter_finite(flat.vertices(), &Norm::linf()).unwrap();
    assert!(d.exactly_equals(&Real::one()));
}

#[test]
fn infinity_is_not_a_float() {
    assert!(Exponent::parse("inf").unwrap().is_infinite());
    assert_eq!(dual_exponent(Exponent::ONE), Exponent::Infinity);
    assert!(Exponent::new(0.5).is_err());
}
