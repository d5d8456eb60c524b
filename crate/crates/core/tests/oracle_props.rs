mod common;

use common::*;
use diampart::geometry::diameter::diameter_finite;
use diampart::geometry::norm::Norm;
use diampart::geometry::polytope::Simplex;
use diampart::geometry::real::{q, Real, Q};
use diampart::geometry::vector::Vector;
use diampart::oracle::{beta_finite_exact, m_colorable, DistanceGraph};
use proptest::prelude::*;
use rand::Rng;

/// `k` random rational points of `s` on a barycentric grid of step 1/12.
fn subset(s: &Simplex, k: usize, g: &mut rand_chacha::ChaCha8Rng) -> Vec<Vector> {
    (0..k)
        .map(|_| {
            let raw: Vec<i64> = (0..4).map(|_| g.gen_range(0..=12)).collect();
            let total: i64 = raw.iter().sum::<i64>().max(1);
            let lambdas: Vec<Q> = if raw.iter().all(|&w| w == 0) {
                vec![q(1, 4); 4]
            } else {
                raw.iter().map(|&w| q(w, total)).collect()
            };
            s.from_barycentric(&lambdas)
        })
        .collect()
}

fn polyhedral_norms(g: &mut rand_chacha::ChaCha8Rng) -> Vec<Norm> {
    vec![Norm::l1(), Norm::linf(), random_gauge(g, 3), Norm::l2()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn oracle_respects_the_construction(seed in 0u64..10_000, k in 9usize..=12) {
        let mut g = rng(seed);
        let s = random_tetrahedron(&mut g);
        let pts = subset(&s, k, &mut g);
        for n in polyhedral_norms(&mut g) {
            let r = beta_finite_exact(&pts, 8, &n).unwrap();
            prop_assert!(r.value.to_f64() <= 9.0 / 16.0 + 1e-12, "{}: {}", n.label(), r.value.render());
        }
    }

    #[test]
    fn coloring_is_proper_and_value_is_a_distance(seed in 0u64..10_000, k in 2usize..=10, m in 1usize..=5) {
        let mut g = rng(seed);
        let s = random_tetrahedron(&mut g);
        let pts = subset(&s, k, &mut g);
        let n = random_gauge(&mut g, 3);
        let r = beta_finite_exact(&pts, m, &n).unwrap();
        let graph = DistanceGraph::new(&pts, &n, r.threshold.clone()).unwrap();
        prop_assert!(graph.is_proper(&r.witness));
        prop_assert!(r.parts().len() <= m);
        let mut ds = vec![Real::zero()];
        for i in 0..k {
            for j in i + 1..k {
                ds.push(n.eval(pts[i].sub(&pts[j]).coords()).unwrap());
            }
        }
        prop_assert!(ds.iter().any(|d| d.exactly_equals(&r.threshold)));
        // Each part's own diameter respects the threshold.
        for part in r.parts() {
            let sub: Vec<Vector> = part.iter().map(|&i| pts[i].clone()).collect();
            prop_assert!(diameter_finite(&sub, &n).unwrap().cmp_real(&r.threshold).is_le());
        }
        // Minimality: every strictly smaller distance is infeasible.
        for d in ds.iter().filter(|d| d.cmp_real(&r.threshold).is_lt()) {
            let below = DistanceGraph::new(&pts, &n, d.clone()).unwrap();
            prop_assert!(m_colorable(&below, m).is_none());
        }
    }

    #[test]
    fn monotone_in_m(seed in 0u64..10_000, k in 3usize..=10) {
        let mut g = rng(seed);
        let s = random_tetrahedron(&mut g);
        let pts = subset(&s, k, &mut g);
        let n = Norm::l1();
        let mut prev = Real::one();
        for m in 1..=6 {
            let v = beta_finite_exact(&pts, m, &n).unwrap().value;
            prop_assert!(v.cmp_real(&prev).is_le());
            prev = v;
        }
    }

    #[test]
    fn scale_translate_invariant(seed in 0u64..10_000, k in 3usize..=9, lambda in (-6i64..=6).prop_filter("nonzero", |x| *x != 0), den in 1i64..5) {
        let mut g = rng(seed);
        let s = random_tetrahedron(&mut g);
        let pts = subset(&s, k, &mut g);
        let lam = q(lambda, den);
        let shift = Vector::new(vec![q(1, 3), q(-2, 7), q(5, 1)]);
        let image: Vec<Vector> = pts.iter().map(|p| p.scale(&lam).add(&shift)).collect();
        for n in polyhedral_norms(&mut g) {
            let a = beta_finite_exact(&pts, 3, &n).unwrap().value;
            let b = beta_finite_exact(&image, 3, &n).unwrap().value;
            prop_assert!(a.exactly_equals(&b), "{}: {} vs {}", n.label(), a.render(), b.render());
        }
    }
}

#[test]
fn triangle_configuration_is_one_half() {
    let e = |i: usize| Vector::unit(3, i);
    let mid = |i: usize, j: usize| e(i).add(&e(j)).scale(&q(1, 2));
    let pts = vec![e(0), e(1), e(2), mid(0, 1), mid(1, 2), mid(0, 2)];
    let r = beta_finite_exact(&pts, 4, &Norm::l2()).unwrap();
    assert!(r.value.exactly_equals(&Real::Exact(q(1, 2))));
    let below = Real::Float(r.threshold.to_f64() * (1.0 - 1e-9));
    assert!(m_colorable(&DistanceGraph::new(&pts, &Norm::l2(), below).unwrap(), 4).is_none());
}

#[test]
fn graph_is_symmetric() {
    let mut g = rng(3);
    let s = random_tetrahedron(&mut g);
    let pts = subset(&s, 10, &mut g);
    let graph = DistanceGraph::new(&pts, &Norm::l1(), Real::Exact(q(2, 1))).unwrap();
    for i in 0..graph.len() {
        assert!(!graph.adjacency[i][i]);
        for j in 0..graph.len() {
            assert_eq!(graph.adjacency[i][j], graph.adjacency[j][i]);
        }
    }
}
