use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use diampart::banach_mazur::{bm_upper, f_eval, f_scan, BmBoundReport};
use diampart::bounds::{
    corollary_identity, lp_beta8_table, minmax_epsilon, Evidence, StepCertificate,
};
use diampart::coverings::{
    attach_coverage, confirm_covering, load_fixture, partition_diameter_ratio,
    search_ball_covering, BallCoveringSolution, CoveringFixture, SearchOptions,
};
use diampart::geometry::body::{parse_body_file, parse_norm, parse_points, Body};
use diampart::geometry::norm::{Exponent, GaugeBody, Norm};
use diampart::geometry::polytope::Simplex;
use diampart::geometry::real::{format_f64, parse_q, q, Real, Q};
use diampart::oracle::beta_finite_exact;
use diampart::partitions::{
    cube_partition, disk_partition4, simplex_partition, triangle_partition4, PartitionCertificate,
    SimplexScheme,
};

use crate::report::{self, coverage_evidence, Outcome};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// `l1`, `l2`, `linf`, `l<p>` or `gauge:FILE` (a JSON vertex array or a
/// `{"kind": "gauge", ...}` object).
pub fn parse_norm_arg(s: &str) -> Result<Norm> {
    if let Some(path) = s.strip_prefix("gauge:") {
        let v: Value = serde_json::from_str(&read(Path::new(path))?)?;
        let norm = if v.is_array() {
            Norm::Gauge(Arc::new(GaugeBody::from_vertices(parse_points(&v)?)?))
        } else {
            parse_norm(&v)?
        };
        return Ok(norm);
    }
    let p = s
        .strip_prefix('l')
        .ok_or_else(|| anyhow!("unknown norm {s:?} (expected l1, l2, linf, l<p> or gauge:FILE)"))?;
    Ok(Norm::P(Exponent::parse(p)?))
}

pub fn parse_rational(s: &str) -> Result<Q> {
    parse_q(s).ok_or_else(|| anyhow!("not a rational number: {s:?}"))
}

fn partition_results(
    cert: &PartitionCertificate,
    norm: Option<&Norm>,
) -> Result<(Value, bool, Evidence)> {
    let cov = cert
        .coverage_evidence
        .as_ref()
        .expect("coverage attached before reporting");
    let mut verified = cov.covered;
    let mut results = json!({
        "scheme": cert.scheme.label(),
        "pieces": cert.piece_count(),
        "certified_ratio": report::real(&cert.ratio),
        "ratio_holds_for": match &cert.norm {
            None => "all norms".to_string(),
            Some(n) => n.label(),
        },
        "coverage": report::coverage(cov),
    });
    if let Some(n) = norm {
        let r = partition_diameter_ratio(cert, n)?;
        verified &= r.cmp_real(&cert.ratio) != std::cmp::Ordering::Greater
            || r.approx_eq(&cert.ratio, 1e-9);
        results["norm"] = json!(n.label());
        results["diameter_ratio"] = report::real(&r);
    }
    let mut evidence = coverage_evidence(cov);
    if !cert.ratio.is_exact() {
        evidence = evidence.max(Evidence::Sampled);
    }
    Ok((results, verified, evidence))
}

pub fn partition_simplex(
    m: usize,
    norm: Option<&str>,
    verify: usize,
    body: Option<&Path>,
) -> Result<Outcome> {
    let scheme = SimplexScheme::from_pieces(m)?;
    let (simplex, body_label) = match body {
        Some(path) => match parse_body_file(&read(path)?)?.body {
            Body::Simplex(s) => (s, path.display().to_string()),
            other => bail!("expected a simplex body, found {}", other.kind()),
        },
        None => (Simplex::regular_tetrahedron(), "regular-tetrahedron".into()),
    };
    let norm = norm.map(parse_norm_arg).transpose()?;
    let mut cert = simplex_partition(&simplex, scheme)?;
    attach_coverage(&mut cert, Some(verify))?;
    let (mut results, mut verified, evidence) = partition_results(&cert, norm.as_ref())?;
    let expected = Real::Exact(scheme.ratio());
    verified &= cert.ratio.exactly_equals(&expected);
    results["expected_ratio"] = report::real(&expected);
    Ok(Outcome {
        inputs: json!({
            "m": m,
            "body": body_label,
            "norm": norm.as_ref().map(Norm::label),
            "verify": verify,
        }),
        results,
        evidence,
        verified,
    })
}

pub fn partition_cube(n: usize) -> Result<Outcome> {
    let mut cert = cube_partition(n)?;
    attach_coverage(&mut cert, None)?;
    let (mut results, mut verified, evidence) = partition_results(&cert, Some(&Norm::linf()))?;
    verified &=
        partition_diameter_ratio(&cert, &Norm::linf())?.exactly_equals(&Real::Exact(q(1, 2)));
    results["expected_ratio"] = report::real(&Real::Exact(q(1, 2)));
    Ok(Outcome {
        inputs: json!({ "n": n }),
        results,
        evidence,
        verified,
    })
}

pub fn partition_triangle(norm: Option<&str>) -> Result<Outcome> {
    let norm = norm.map(parse_norm_arg).transpose()?;
    let mut cert = triangle_partition4(&Simplex::standard(2))?;
    attach_coverage(&mut cert, None)?;
    let (results, verified, evidence) = partition_results(&cert, norm.as_ref())?;
    Ok(Outcome {
        inputs: json!({ "body": "standard-triangle", "norm": norm.as_ref().map(Norm::label) }),
        results,
        evidence,
        verified: verified && cert.ratio.exactly_equals(&Real::Exact(q(1, 2))),
    })
}

pub fn partition_disk() -> Result<Outcome> {
    let mut cert = disk_partition4()?;
    attach_coverage(&mut cert, None)?;
    let (results, verified, evidence) = partition_results(&cert, Some(&Norm::l2()))?;
    Ok(Outcome {
        inputs: json!({ "body": "l2-disk" }),
        results,
        evidence,
        verified,
    })
}

fn named_body(s: &str) -> Result<(Body, Option<Norm>)> {
    Ok(match s {
        "l1ball" => (
            Body::PBall {
                dim: 3,
                p: Exponent::ONE,
            },
            Some(Norm::l1()),
        ),
        "l2ball" => (
            Body::PBall {
                dim: 3,
                p: Exponent::TWO,
            },
            Some(Norm::l2()),
        ),
        "l2disk" => (
            Body::PBall {
                dim: 2,
                p: Exponent::TWO,
            },
            Some(Norm::l2()),
        ),
        "cube" => (Body::Cube { dim: 3 }, Some(Norm::linf())),
        path => {
            let f = parse_body_file(&read(Path::new(path))?)?;
            (f.body, f.norm)
        }
    })
}

fn covering_results(sol: &BallCoveringSolution) -> Value {
    json!({
        "success": sol.success,
        "centers": sol.centers.iter().map(report::point).collect::<Vec<_>>(),
        "radius": report::rational(&sol.radius),
        "norm": sol.norm.label(),
        "residual_margin": report::real(&sol.residual_margin),
        "search_margin": format_f64(sol.search_margin),
        "confirmation_samples": sol.confirmation_samples,
        "exact_confirmation": sol.exact_confirmation,
        "start": sol.start,
        "seed": sol.seed,
    })
}

fn body_json(body: &Body) -> Value {
    match body {
        Body::PBall { dim, p } => json!({ "kind": "pball", "dim": dim, "p": p.render() }),
        Body::Cube { dim } => json!({ "kind": "cube", "dim": dim }),
        Body::Simplex(s) => json!({
            "kind": "simplex",
            "vertices": s.vertices().iter().map(report::point).collect::<Vec<_>>(),
        }),
        Body::Polytope(p) => json!({
            "kind": "vpolytope",
            "vertices": p.vertices().iter().map(report::point).collect::<Vec<_>>(),
        }),
    }
}

fn norm_json(norm: &Norm) -> Value {
    match norm {
        Norm::P(p) => json!({ "kind": "p", "p": p.render() }),
        Norm::Gauge(g) => json!({
            "kind": "gauge",
            "vertices": g.polytope().vertices().iter().map(report::point).collect::<Vec<_>>(),
        }),
    }
}

pub fn cover_search(
    body: &str,
    m: usize,
    r: &str,
    norm: Option<&str>,
    seed: u64,
    fixture_out: Option<&Path>,
) -> Result<Outcome> {
    let (parent, default_norm) = named_body(body)?;
    let norm = match norm {
        Some(s) => parse_norm_arg(s)?,
        None => default_norm.unwrap_or_else(Norm::l2),
    };
    let radius = parse_rational(r)?;
    let sol = search_ball_covering(&parent, m, &radius, &norm, seed, &SearchOptions::default())?;
    if let Some(path) = fixture_out {
        let fx = CoveringFixture::from_solution(body_json(&parent), norm_json(&norm), &sol);
        let text = serde_json::to_string_pretty(&fx)? + "\n";
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Outcome {
        inputs: json!({ "body": body, "m": m, "r": r, "norm": norm.label(), "seed": seed }),
        results: covering_results(&sol),
        evidence: Evidence::Sampled,
        verified: sol.success,
    })
}

pub fn cover_check(fixture: &Path) -> Result<Outcome> {
    let fx = load_fixture(fixture)?;
    let (body, norm, radius, centers) = fx.parsed()?;
    let sol = confirm_covering(
        &body,
        &centers,
        &radius,
        &norm,
        fx.seed,
        &SearchOptions::default(),
    )?;
    Ok(Outcome {
        inputs: json!({ "fixture": fixture.display().to_string() }),
        results: covering_results(&sol),
        evidence: Evidence::Sampled,
        verified: sol.success,
    })
}

fn bm_results(r: &BmBoundReport) -> Value {
    let c = &r.certificate;
    let n = c.inner.dim();
    let identity: Vec<Vec<String>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { "1".into() } else { "0".into() })
                .collect()
        })
        .collect();
    let transform = match &c.transform {
        Some(t) => json!(t
            .iter()
            .map(|row| row.iter().map(report::rational).collect::<Vec<_>>())
            .collect::<Vec<_>>()),
        None => json!(identity),
    };
    let translation = match &c.translation {
        Some(v) => report::point(v),
        None => json!(vec!["0"; n]),
    };
    json!({
        "p": r.p.render(),
        "q": r.q.render(),
        "gamma": report::real(&r.gamma_bound),
        "method": r.method.label(),
        "cited_equality": r.cited_equality,
        "certificate": {
            "inner_vertices": c.inner.vertices().iter().map(report::point).collect::<Vec<_>>(),
            "inner_scale": report::real(&c.inner_scale),
            "outer": c.outer.kind(),
            "gamma": report::real(&c.gamma),
            "transform": transform,
            "translation": translation,
            "verified": c.verified,
            "exact": c.exact,
            "inner_margin": format_f64(c.inner_margin),
            "outer_margin": format_f64(c.outer_margin),
            "sample_margin": format_f64(c.sample_margin),
            "worst_witness": report::float_point(&c.worst_witness),
        },
    })
}

pub fn bm_bound(p: &str) -> Result<Outcome> {
    let p = Exponent::parse(p)?;
    let r = bm_upper(p)?;
    let evidence = if r.cited_equality {
        Evidence::Cited
    } else if r.certificate.exact {
        Evidence::Exact
    } else {
        Evidence::Sampled
    };
    Ok(Outcome {
        inputs: json!({ "p": p.render() }),
        results: bm_results(&r),
        evidence,
        verified: r.certificate.verified,
    })
}

pub fn bm_scan(lo: f64, hi: f64, step: f64) -> Result<Outcome> {
    let s = f_scan(lo, hi, step)?;
    let f2 = f_eval(2.0);
    Ok(Outcome {
        inputs: json!({ "lo": format_f64(lo), "hi": format_f64(hi), "step": format_f64(step) }),
        results: json!({
            "p0": format_f64(s.p0),
            "f_p0": format_f64(s.f_p0),
            "f_lo": format_f64(s.f_lo),
            "f_hi": format_f64(s.f_hi),
            "f_2": format_f64(f2),
            "f_p0_below_f_2": s.f_p0 < f2,
            "grid_points": s.grid_points,
            "sign_changes": s.sign_changes,
            "unique_minimum": s.unique_minimum(),
        }),
        evidence: Evidence::Sampled,
        verified: s.sign_changes <= 1,
    })
}

pub fn beta_table(space: &str, m: usize, p_list: &str) -> Result<Outcome> {
    if space != "lp3" || m != 8 {
        bail!("only --space lp3 --m 8 is available");
    }
    let ps = p_list
        .split(',')
        .map(|s| Exponent::parse(s).map_err(anyhow::Error::from))
        .collect::<Result<Vec<_>>>()?;
    let table = lp_beta8_table(&ps)?;
    let mut verified = true;
    let mut evidence = Evidence::Exact;
    let rows: Vec<Value> = ps
        .iter()
        .zip(&table)
        .map(|(p, b)| {
            let ok = b.reverify();
            verified &= ok;
            evidence = evidence.max(b.evidence());
            json!({
                "p": p.render(),
                "bound": report::real(&b.value),
                "evidence_level": b.evidence().label(),
                "reverified": ok,
                "provenance": b.provenance.iter().map(|s| json!({
                    "formula": s.formula,
                    "inputs": s.inputs.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
                    "evidence_level": s.evidence.label(),
                    "certificate": match &s.certificate {
                        StepCertificate::Sandwich(_) => "sandwich",
                        StepCertificate::CubePartition { .. } => "cube-partition",
                        StepCertificate::Inequality { .. } => "inequality",
                        StepCertificate::Product { .. } => "product",
                        StepCertificate::Cited(_) => "cited",
                    },
                    "reverified": s.reverify(),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Outcome {
        inputs: json!({ "space": space, "m": m, "p_list": p_list }),
        results: json!({ "rows": rows }),
        evidence,
        verified,
    })
}

pub fn beta_minmax(eta: &str, ball: &str) -> Result<Outcome> {
    let (e, b) = (parse_rational(eta)?, parse_rational(ball)?);
    let r = minmax_epsilon(&Real::Exact(e), &Real::Exact(b))?;
    let agree = (r.bound.to_f64() - r.golden_bound).abs() <= 1e-9;
    Ok(Outcome {
        inputs: json!({ "eta": eta, "ball": ball }),
        results: json!({
            "eps_star": report::real(&r.eps_star),
            "bound": report::real(&r.bound),
            "simplex_branch": report::real(&r.branch_values.0),
            "ball_branch": report::real(&r.branch_values.1),
            "boundary_limit": r.boundary_limit,
            "golden_eps": format_f64(r.golden_eps),
            "golden_bound": format_f64(r.golden_bound),
            "golden_agrees": agree,
        }),
        evidence: if r.bound.is_exact() {
            Evidence::Exact
        } else {
            Evidence::Sampled
        },
        verified: agree,
    })
}

pub fn check_corollary() -> Result<Outcome> {
    let holds = corollary_identity(&q(221, 328), &q(7, 57));
    Ok(Outcome {
        inputs: json!({ "beta_ball": "221/328", "eps": "7/57", "eta": "9/16" }),
        results: json!({
            "identity": "2(3 - 7/57)/(4 - 7/57) * 221/328 = 1",
            "holds": holds,
        }),
        evidence: Evidence::Exact,
        verified: holds,
    })
}

pub fn oracle(points: &Path, m: usize, norm: &str) -> Result<Outcome> {
    let v: Value = serde_json::from_str(&read(points)?)?;
    let pts = parse_points(v.get("points").unwrap_or(&v))?;
    let norm = parse_norm_arg(norm)?;
    let r = beta_finite_exact(&pts, m, &norm)?;
    let exact = r.value.is_exact();
    Ok(Outcome {
        inputs: json!({ "points": points.display().to_string(), "m": m, "norm": norm.label() }),
        results: json!({
            "beta": report::real(&r.value),
            "threshold": report::real(&r.threshold),
            "diameter": report::real(&r.diameter),
            "parts": r.parts(),
        }),
        evidence: if exact {
            Evidence::Exact
        } else {
            Evidence::Sampled
        },
        verified: true,
    })
}
