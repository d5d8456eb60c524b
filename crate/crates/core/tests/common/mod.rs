#![allow(dead_code)]

use std::sync::Arc;

use diampart::geometry::norm::{Exponent, GaugeBody, Norm};
use diampart::geometry::polytope::Simplex;
use diampart::geometry::real::{q, Q};
use diampart::geometry::vector::Vector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rational() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=8).prop_map(|(a, b)| q(a, b))
}

pub fn rational_vec(n: usize) -> impl Strategy<Value = Vec<Q>> {
    proptest::collection::vec(rational(), n)
}

pub fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::ONE),
        Just(Exponent::TWO),
        Just(Exponent::Infinity),
        (1.0f64..8.0).prop_map(Exponent::Finite),
    ]
}

fn int_point(rng: &mut ChaCha8Rng, n: usize, range: i64) -> Vector {
    Vector::from_ints(
        &(0..n)
            .map(|_| rng.gen_range(-range..=range))
            .collect::<Vec<_>>(),
    )
}

/// A non-degenerate tetrahedron with small integer vertices.
pub fn random_tetrahedron(rng: &mut ChaCha8Rng) -> Simplex {
    loop {
        let v: Vec<Vector> = (0..4).map(|_| int_point(rng, 3, 6)).collect();
        if let Ok(s) = Simplex::new(v) {
            return s;
        }
    }
}

/// `±` a few random integer vectors plus the scaled axes, so the body is
/// full-dimensional and symmetric.
pub fn random_gauge(rng: &mut ChaCha8Rng, n: usize) -> Norm {
    let mut verts = Vec::new();
    for i in 0..n {
        let e = Vector::unit(n, i).scale(&q(rng.gen_range(1..=3), 1));
        verts.push(e.neg());
        verts.push(e);
    }
    for _ in 0..rng.gen_range(1..=3) {
        let v = int_point(rng, n, 3);
        if !v.is_zero() {
            verts.push(v.neg());
            verts.push(v);
        }
    }
    // Duplicates and interior points are harmless for the gauge.
    Norm::Gauge(Arc::new(
        GaugeBody::from_vertices(verts).expect("symmetric, full-dimensional"),
    ))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The norms of the norm-independence checks, plus one random gauge.
pub fn test_norms(rng: &mut ChaCha8Rng) -> Vec<Norm> {
    vec![
        Norm::l1(),
        Norm::l2(),
        Norm::p(3.0).unwrap(),
        Norm::linf(),
        random_gauge(rng, 3),
    ]
}
