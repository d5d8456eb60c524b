mod common;

use std::sync::Arc;

use common::*;
use diampart::coverings::{
    partition_diameter_ratio, verify_covering, witness_is_uncovered, CoverageMode,
};
use diampart::geometry::body::Body;
use diampart::geometry::norm::Norm;
use diampart::geometry::polytope::{Homothet, Simplex};
use diampart::geometry::real::{q, Real, Q};
use diampart::partitions::{
    cube_partition, disk_partition4, residual_region, simplex_partition, simplex_vertex_homothets,
    triangle_partition4, PartitionPiece, Region, SimplexScheme,
};
use proptest::prelude::*;

const SCHEMES: [SimplexScheme; 3] = [SimplexScheme::M5, SimplexScheme::M8, SimplexScheme::M9];

fn expected_ratio(s: SimplexScheme) -> Q {
    match s {
        SimplexScheme::M5 => q(3, 5),
        SimplexScheme::M8 => q(9, 16),
        SimplexScheme::M9 => q(9, 17),
    }
}

fn homothet_pieces(hs: Vec<Homothet>) -> Vec<PartitionPiece> {
    hs.into_iter()
        .map(|h| PartitionPiece::new(vec![Region::Homothet(h.clone())], Some(h)).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn simplex_ratios_are_norm_independent(seed in 0u64..10_000) {
        let mut g = rng(seed);
        let s = random_tetrahedron(&mut g);
        let norms = test_norms(&mut g);
        for scheme in SCHEMES {
            let cert = simplex_partition(&s, scheme).unwrap();
            let want = Real::Exact(expected_ratio(scheme));
            prop_assert!(cert.ratio.exactly_equals(&want));
            prop_assert_eq!(cert.piece_count(), scheme.pieces());
            for n in &norms {
                prop_assert!(cert.holds_for(n));
                let r = partition_diameter_ratio(&cert, n).unwrap();
                // The vertex homothets are unclipped, so the bound is attained.
                if r.is_exact() {
                    prop_assert!(r.exactly_equals(&want), "{}: {}", n.label(), r.render());
                } else {
                    prop_assert!((r.to_f64() - want.to_f64()).abs() <= 1e-12, "{}", n.label());
                }
            }
        }
    }

    #[test]
    fn scheme_pieces_cover_random_points(seed in 0u64..10_000, raw in proptest::collection::vec(0i64..50, 4)) {
        // Continuum argument: either some λᵢ is at least the vertex cap, or
        // every λᵢ is below it and the point is in the residual.
        prop_assume!(raw.iter().any(|&w| w > 0));
        let total: i64 = raw.iter().sum();
        let lambdas: Vec<Q> = raw.iter().map(|&w| q(w, total)).collect();
        let s = random_tetrahedron(&mut rng(seed));
        let x = s.from_barycentric(&lambdas);
        for scheme in SCHEMES {
            let t = scheme.vertex_cap();
            let big = lambdas.iter().any(|l| *l >= t);
            prop_assert!(big || residual_region(&s, &t).contains(&x).unwrap());
            let cert = simplex_partition(&s, scheme).unwrap();
            let mut inside = false;
            for p in &cert.pieces {
                inside |= p.contains_exact(&x).unwrap();
            }
            prop_assert!(inside, "{} misses {:?}", scheme.label(), lambdas);
        }
    }

    #[test]
    fn grid_coverage_descends_to_divisors(seed in 0u64..10_000) {
        let s = random_tetrahedron(&mut rng(seed));
        let cert = simplex_partition(&s, SimplexScheme::M8).unwrap();
        for n in [24, 12, 6, 3, 2, 1] {
            let r = verify_covering(&cert.parent, &cert.pieces, CoverageMode::ExactGrid, n).unwrap();
            prop_assert!(r.covered, "N={}", n);
            prop_assert_eq!(r.evidence_level(), "grid-certified");
        }
    }

    #[test]
    fn triangle_halves_under_random_gauges(seed in 0u64..10_000) {
        let mut g = rng(seed);
        let tri = loop {
            let v: Vec<_> = (0..3)
                .map(|_| diampart::geometry::vector::Vector::from_ints(&[
                    rand::Rng::gen_range(&mut g, -5..=5),
                    rand::Rng::gen_range(&mut g, -5..=5),
                ]))
                .collect();
            if let Ok(t) = Simplex::new(v) {
                break t;
            }
        };
        let cert = triangle_partition4(&tri).unwrap();
        prop_assert_eq!(cert.piece_count(), 4);
        for n in [Norm::l1(), Norm::linf(), random_gauge(&mut g, 2)] {
            let r = partition_diameter_ratio(&cert, &n).unwrap();
            prop_assert!(r.exactly_equals(&Real::Exact(q(1, 2))), "{}", r.render());
        }
        let r = verify_covering(&cert.parent, &cert.pieces, CoverageMode::ExactGrid, 32).unwrap();
        prop_assert!(r.covered);
    }
}

#[test]
fn piece_counts() {
    let s = Simplex::regular_tetrahedron();
    for scheme in SCHEMES {
        assert_eq!(
            simplex_partition(&s, scheme).unwrap().piece_count(),
            scheme.pieces()
        );
    }
    for n in 1..=8 {
        assert_eq!(cube_partition(n).unwrap().piece_count(), 1 << n);
    }
    assert_eq!(
        triangle_partition4(&Simplex::standard(2))
            .unwrap()
            .piece_count(),
        4
    );
    assert_eq!(disk_partition4().unwrap().piece_count(), 4);
}

#[test]
fn ratio_chain_decreases_with_m() {
    let s = Simplex::regular_tetrahedron();
    let r: Vec<f64> = SCHEMES
        .iter()
        .map(|&m| simplex_partition(&s, m).unwrap().ratio.to_f64())
        .collect();
    assert!(r[0] > r[1] && r[1] > r[2]);
    assert_eq!(r, vec![0.6, 0.5625, 9.0 / 17.0]);
}

#[test]
fn cube_coverage_is_exact_at_every_resolution() {
    for n in 1..=3 {
        let cert = cube_partition(n).unwrap();
        assert!(partition_diameter_ratio(&cert, &Norm::linf())
            .unwrap()
            .exactly_equals(&Real::Exact(q(1, 2))));
        for grid in 1..=12 {
            let r =
                verify_covering(&cert.parent, &cert.pieces, CoverageMode::ExactGrid, grid).unwrap();
            assert!(r.covered, "n={n} N={grid}");
        }
    }
}

#[test]
fn negative_reports_are_sound() {
    let s = Simplex::new(vec![
        diampart::geometry::vector::Vector::from_ints(&[0, 0, 0]),
        diampart::geometry::vector::Vector::from_ints(&[4, 0, 0]),
        diampart::geometry::vector::Vector::from_ints(&[0, 4, 0]),
        diampart::geometry::vector::Vector::from_ints(&[0, 0, 4]),
    ])
    .unwrap();
    // μ = 9/16 vertex homothets alone leave the residual open.
    let mu = q(9, 16);
    let hs: Vec<Homothet> = s
        .vertices()
        .iter()
        .map(|v| {
            Homothet::new(
                mu.clone(),
                v.scale(&(Q::from_integer(1.into()) - &mu)),
                Arc::new(s.to_polytope()),
            )
            .unwrap()
        })
        .collect();
    assert!(simplex_vertex_homothets(&s, &mu).is_err());
    let pieces = homothet_pieces(hs);
    let parent = Body::Simplex(s.clone());
    for mode in [CoverageMode::ExactGrid, CoverageMode::Sampled] {
        let r = verify_covering(&parent, &pieces, mode, 16).unwrap();
        assert!(!r.covered);
        assert!(
            r.worst_witness.margin < 0.0,
            "uncovered witnesses have negative depth"
        );
        assert!(witness_is_uncovered(&r, &pieces).unwrap());
    }
    // The enclosure-based μ = 3/4 family covers.
    let pieces = homothet_pieces(simplex_vertex_homothets(&s, &q(3, 4)).unwrap());
    assert!(
        verify_covering(&parent, &pieces, CoverageMode::ExactGrid, 16)
            .unwrap()
            .covered
    );
}

#[test]
fn disk_quadrants_are_sampled_not_certified() {
    let cert = disk_partition4().unwrap();
    let r = verify_covering(&cert.parent, &cert.pieces, CoverageMode::Sampled, 4096).unwrap();
    assert!(r.covered);
    assert_eq!(r.evidence_level(), "sampled");
    let ratio = partition_diameter_ratio(&cert, &Norm::l2()).unwrap();
    assert!(!ratio.is_exact());
    assert!((ratio.to_f64() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
    assert!(ratio.to_f64() <= cert.ratio.to_f64() + 1e-9);
}
