use diampart::banach_mazur::{
    bm_upper, edge_triple, f_eval, f_scan, lp_parallelepiped_bound, parallelepiped_vertices,
    sandwich_verify, TOLERANCE,
};
use diampart::bounds::{
    ball_branch, lp_beta8_table, minmax_epsilon, parallelepiped_cap, simplex_branch,
    stability_transfer,
};
use diampart::geometry::body::Body;
use diampart::geometry::norm::{pnorm_f64, Exponent, GaugeBody};
use diampart::geometry::polytope::VPolytope;
use diampart::geometry::real::{q, Real, Q};
use num_traits::One;
use proptest::prelude::*;

fn independent_gamma(p: f64) -> f64 {
    let e = Exponent::Finite(p);
    pnorm_f64(&[1.0, 1.0, 4.0], e) * pnorm_f64(&[3.0, 1.0, 3.0], e.dual()) / 10.0
}

proptest! {
    #[test]
    fn f_matches_ten_gamma(p in 1.0f64..=2.0) {
        prop_assume!(p > 1.0);
        let g = lp_parallelepiped_bound(Exponent::Finite(p)).unwrap().gamma_bound.to_f64();
        prop_assert!((f_eval(p) - 10.0 * g).abs() <= 1e-10 * f_eval(p));
        prop_assert!((g - independent_gamma(p)).abs() <= 1e-12 * g);
    }

    #[test]
    fn certificates_reverify(p in 1.0f64..8.0) {
        let r = bm_upper(Exponent::Finite(p)).unwrap();
        prop_assert!(r.gamma_bound.to_f64() >= 1.0 - 1e-12);
        prop_assert!(r.certificate.verified);
        let again = r.certificate.reverify().unwrap();
        prop_assert!(again.verified);
        prop_assert!(again.min_margin() >= -TOLERANCE);
    }

    #[test]
    fn branches_are_monotone(eta in 0.05f64..1.0, beta in 0.05f64..1.0) {
        let steps = 10_000;
        let eps = |k: usize| (k as f64 + 0.5) / steps as f64 / 3.0;
        for k in 1..steps {
            prop_assert!(simplex_branch(eta, eps(k)) >= simplex_branch(eta, eps(k - 1)));
            prop_assert!(ball_branch(beta, eps(k)) <= ball_branch(beta, eps(k - 1)));
        }
    }

    #[test]
    fn closed_form_matches_golden(eta in 1u32..100, beta in 1u32..100) {
        let (eta, beta) = (eta as f64 / 100.0, beta as f64 / 100.0);
        let r = minmax_epsilon(&Real::Float(eta), &Real::Float(beta)).unwrap();
        prop_assert!((r.bound.to_f64() - r.golden_bound).abs() <= 1e-9,
            "{} vs {}", r.bound.to_f64(), r.golden_bound);
        // The bound dominates the objective on a probe grid.
        for k in 1..300 {
            let e = k as f64 / 900.0;
            let obj = simplex_branch(eta, e).max(ball_branch(beta, e));
            prop_assert!(r.bound.to_f64() <= obj + 1e-12);
        }
    }

    #[test]
    fn transfers_never_exceed_one(beta in 1u32..=100, gamma in 100u32..400) {
        let (v, step) = stability_transfer(&Real::Exact(q(beta as i64, 100)), &Real::Exact(q(gamma as i64, 100))).unwrap();
        prop_assert!(v.to_f64() <= 1.0);
        prop_assert!(step.reverify());
    }
}

#[test]
fn gamma_stays_under_the_cap() {
    let cap = parallelepiped_cap().to_f64();
    assert!((cap - 342f64.sqrt() / 10.0).abs() < 1e-15);
    for k in 0..=1000 {
        let p = 1.0 + k as f64 / 1000.0;
        let g = lp_parallelepiped_bound(Exponent::Finite(p))
            .unwrap()
            .gamma_bound
            .to_f64();
        assert!(g <= cap + 1e-9, "p={p}: {g}");
        if p <= 1.735 {
            assert!(g <= 1.8 + 1e-12, "p={p}: {g}");
        }
    }
    // The endpoint values.
    let at1 = lp_parallelepiped_bound(Exponent::ONE).unwrap().gamma_bound;
    assert!(at1.exactly_equals(&Real::Exact(q(9, 5))));
    let at2 = lp_parallelepiped_bound(Exponent::TWO).unwrap().gamma_bound;
    assert!(at2.exactly_equals(&parallelepiped_cap()));
}

#[test]
fn facet_functionals_are_one_on_four_vertices() {
    let verts = parallelepiped_vertices(&edge_triple());
    let body = GaugeBody::from_vertices(verts.clone()).unwrap();
    assert_eq!(body.facet_normals().len(), 6);
    for a in body.facet_normals() {
        let values: Vec<Q> = verts.iter().map(|v| a.dot(v)).collect();
        assert_eq!(values.iter().filter(|x| x.is_one()).count(), 4);
        assert!(values.iter().all(|x| *x <= Q::one()));
    }
}

#[test]
fn scan_finds_one_interior_minimum() {
    let s = f_scan(1.0, 2.0, 1e-4).unwrap();
    assert!(s.unique_minimum());
    assert!((s.p0 - 1.320).abs() < 1e-3, "{}", s.p0);
    assert!((s.f_p0 - 17.550).abs() < 1e-3, "{}", s.f_p0);
    assert!((s.f_hi - 342f64.sqrt()).abs() < 1e-9);
    assert!(s.f_p0 < s.f_hi && s.f_p0 < s.f_lo);
}

#[test]
fn undersized_gamma_is_rejected() {
    let cube = VPolytope::cube(3);
    let ball = Body::PBall {
        dim: 3,
        p: Exponent::TWO,
    };
    let inner = Real::sqrt_of(q(1, 3));
    assert!(
        sandwich_verify(&cube, &inner, &ball, &Real::sqrt_of(q(3, 1)))
            .unwrap()
            .verified
    );
    assert!(
        !sandwich_verify(&cube, &inner, &ball, &Real::Exact(q(17, 10)))
            .unwrap()
            .verified
    );
}

#[test]
fn threshold_is_sharp() {
    let eta = Real::Exact(q(9, 16));
    let threshold = q(221, 328);
    let mut below = 0;
    for k in 1..=1000 {
        let x = q(k, 1000);
        let b = minmax_epsilon(&eta, &Real::Exact(x.clone())).unwrap().bound;
        let under_one = b.cmp_real(&Real::one()).is_lt();
        assert_eq!(under_one, x < threshold, "x = {x}: bound {}", b.render());
        below += under_one as usize;
    }
    assert_eq!(below, 673);
    let at = minmax_epsilon(&eta, &Real::Exact(threshold)).unwrap();
    assert!(at.bound.exactly_equals(&Real::one()));
}

#[test]
fn beta_table_is_bounded_and_reverifies() {
    let ps: Vec<Exponent> = (0..=40)
        .map(|k| Exponent::Finite(1.0 + k as f64 / 10.0))
        .chain([Exponent::Infinity])
        .collect();
    let table = lp_beta8_table(&ps).unwrap();
    let low = 342f64.sqrt() / 20.0;
    for (p, b) in ps.iter().zip(&table) {
        let v = b.value.to_f64();
        assert!(v > 0.0 && v <= 1.0);
        assert!(b.reverify(), "p = {}", p.render());
        let want = if p.is_infinite() {
            0.5
        } else if p.value() < 2.0 {
            low
        } else {
            3f64.powf(1.0 / p.value()) / 2.0
        };
        assert!(
            (v - want).abs() <= 1e-9,
            "p = {}: {v} vs {want}",
            p.render()
        );
    }
    // The accepted jump at p = 2.
    let just_below = lp_beta8_table(&[Exponent::Finite(2.0 - 1e-9)]).unwrap();
    assert!((just_below[0].value.to_f64() - low).abs() < 1e-12);
    assert!(table[10].value.exactly_equals(&Real::sqrt_of(q(3, 4))));
}
