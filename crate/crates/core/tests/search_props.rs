use std::path::PathBuf;

use diampart::coverings::{confirm_covering, load_fixture, search_ball_covering, SearchOptions};
use diampart::geometry::body::Body;
use diampart::geometry::norm::{Exponent, Norm};
use diampart::geometry::real::{q, Real};
use diampart::geometry::vector::Vector;

fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/l1ball_m8.json")
}

#[test]
fn shipped_fixture_reconfirms() {
    let fx = load_fixture(&fixture_path()).unwrap();
    let (body, norm, r, centers) = fx.parsed().unwrap();
    assert_eq!((fx.m, r.clone()), (8, q(2, 3)));
    let sol = confirm_covering(
        &body,
        &centers,
        &r,
        &norm,
        fx.seed,
        &SearchOptions::default(),
    )
    .unwrap();
    assert!(sol.success);
    assert!(sol.exact_confirmation);
    assert!(sol.residual_margin.cmp_real(&Real::zero()).is_le());
}

#[test]
fn l1_search_reproduces_the_fixture() {
    let fx = load_fixture(&fixture_path()).unwrap();
    let (body, norm, r, centers) = fx.parsed().unwrap();
    let sol =
        search_ball_covering(&body, 8, &r, &norm, fx.seed, &SearchOptions::default()).unwrap();
    assert!(sol.success);
    assert_eq!(sol.centers, centers);
    // Confirmation on a finer set does not undo the search's margin.
    assert!(sol.residual_margin.to_f64() - sol.search_margin <= 1e-6);
}

#[test]
fn cube_search_is_deterministic_and_dyadic() {
    let cube = Body::Cube { dim: 3 };
    let opts = SearchOptions::default();
    let a = search_ball_covering(&cube, 8, &q(1, 2), &Norm::linf(), 11, &opts).unwrap();
    let b = search_ball_covering(&cube, 8, &q(1, 2), &Norm::linf(), 11, &opts).unwrap();
    assert!(a.success);
    assert_eq!(a.centers, b.centers);
    assert_eq!(a.residual_margin, b.residual_margin);
    let mut got = a.centers.clone();
    got.sort();
    let mut want: Vec<Vector> = (0..8)
        .map(|k| {
            Vector::new(
                (0..3)
                    .map(|j| if k >> j & 1 == 1 { q(1, 2) } else { q(-1, 2) })
                    .collect(),
            )
        })
        .collect();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn too_few_balls_report_a_positive_margin() {
    // Seven l_inf balls of radius 1/2 cannot cover the cube: some vertex
    // needs its own ball.
    let cube = Body::Cube { dim: 3 };
    let opts = SearchOptions {
        starts: 2,
        ..SearchOptions::default()
    };
    let sol = search_ball_covering(&cube, 7, &q(1, 2), &Norm::linf(), 5, &opts).unwrap();
    assert!(!sol.success);
    assert!(sol.residual_margin.to_f64() > 0.0);
}

#[test]
fn out_of_budget_requests_are_errors() {
    let ball = Body::PBall {
        dim: 3,
        p: Exponent::ONE,
    };
    assert!(search_ball_covering(
        &ball,
        17,
        &q(1, 2),
        &Norm::l1(),
        1,
        &SearchOptions::default()
    )
    .is_err());
}
