//! Body-level properties: support additivity, Monte Carlo volumes against
//! exact formulas and polygon oracles, sampling moments, and the
//! Brunn-Minkowski / Rogers-Shephard volume inequalities.

mod common;

use common::*;
use entrovol::bodies::{intersection_volume_mc, linear_image, Body};
use entrovol::linalg::SquareMatrix;
use entrovol::rng::SeededStream;
use entrovol::special::gen_binomial;
use proptest::prelude::*;

fn seeded_zonotope(n: usize, gens: usize, stream: &mut SeededStream) -> Body {
    Body::Zonotope {
        center: (0..n).map(|_| stream.gaussian() * 0.3).collect(),
        generators: (0..gens)
            .map(|_| (0..n).map(|_| stream.gaussian()).collect())
            .collect(),
    }
}

fn random_body(n: usize, which: usize, stream: &mut SeededStream) -> Body {
    match which % 4 {
        0 => {
            let lo: Vec<f64> = (0..n).map(|_| -stream.uniform() - 0.1).collect();
            let hi: Vec<f64> = (0..n).map(|_| stream.uniform() + 0.1).collect();
            Body::Box { lo, hi }
        }
        1 => Body::Ball {
            center: (0..n).map(|_| stream.gaussian() * 0.5).collect(),
            radius: 0.5 + stream.uniform(),
        },
        2 => seeded_zonotope(n, n + 1, stream),
        _ => {
            let vertices: Vec<Vec<f64>> = (0..n + 3)
                .map(|_| (0..n).map(|_| stream.gaussian()).collect())
                .collect();
            Body::VPolytope { vertices }
        }
    }
}

#[test]
fn support_additivity_over_random_pairs() {
    let mut stream = SeededStream::new(101, "bodies/support-add");
    for trial in 0..25 {
        let n = 1 + trial % 4;
        let a = random_body(n, trial, &mut stream);
        let b = random_body(n, trial + 1, &mut stream);
        let sum = a.minkowski_sum(&b).unwrap();
        for _ in 0..100 {
            let dir: Vec<f64> = (0..n).map(|_| stream.gaussian()).collect();
            if dir.iter().all(|d| d.abs() < 1e-12) {
                continue;
            }
            let lhs = sum.support_function(&dir);
            let rhs = a.support_function(&dir) + b.support_function(&dir);
            let scale = 1.0 + lhs.abs().max(rhs.abs());
            assert!(
                (lhs - rhs).abs() <= 1e-9 * scale,
                "additivity violated: {lhs} vs {rhs} ({a:?} + {b:?})"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // sum nodes compute the support sum literally, so the identity is exact
    #[test]
    fn sum_node_support_is_bit_exact(seed in any::<u64>()) {
        let mut stream = SeededStream::new(seed, "prop/sum-support");
        let a = random_body(2, (seed % 4) as usize, &mut stream);
        let b = Body::Ball {
            center: vec![stream.gaussian(), stream.gaussian()],
            radius: 1.0,
        };
        let sum = Body::Sum { parts: vec![a.clone(), b.clone()] };
        for _ in 0..20 {
            let dir = vec![stream.gaussian(), stream.gaussian()];
            if dir.iter().all(|d| d.abs() < 1e-12) { continue; }
            prop_assert_eq!(
                sum.support_function(&dir),
                a.support_function(&dir) + b.support_function(&dir)
            );
        }
    }

    // |u(Z)| = |det u| |Z| exactly (within fp) for zonotopes
    #[test]
    fn linear_image_scales_zonotope_volume(seed in any::<u64>()) {
        let mut stream = SeededStream::new(seed, "prop/linimg");
        let z = seeded_zonotope(2, 3, &mut stream);
        let u = SquareMatrix::from_rows(&[
            vec![1.0 + stream.gaussian() * 0.3, stream.gaussian() * 0.3],
            vec![stream.gaussian() * 0.3, 1.0 + stream.gaussian() * 0.3],
        ]);
        let img = linear_image(&u, &z).unwrap();
        let expect = u.det().abs() * z.volume_exact().unwrap();
        prop_assert!((img.volume_exact().unwrap() - expect).abs() <= 1e-10 * (1.0 + expect));
    }
}

#[test]
fn mc_volume_matches_exact_formulas_over_seeded_trials() {
    // 50 seeded trials over bodies with exact volumes
    let stream = SeededStream::new(7, "bodies/mc-vs-exact");
    for trial in 0..50 {
        let mut gen = stream.substream(&format!("gen/{trial}"));
        let n = 1 + trial % 3;
        let body = match trial % 4 {
            0 => random_body(n, 0, &mut gen),
            1 => random_body(n, 1, &mut gen),
            2 => seeded_zonotope(n, n + 1, &mut gen),
            _ => Body::Ellipsoid {
                center: vec![0.0; n],
                shape: SquareMatrix::from_diag(
                    &(0..n).map(|_| 0.5 + gen.uniform()).collect::<Vec<_>>(),
                ),
            },
        };
        let exact = body.volume_exact().unwrap();
        let est = body.volume_mc(8_000, &stream.substream(&format!("mc/{trial}"))).unwrap();
        assert!(
            (est.value - exact).abs() <= 3.0 * est.stderr + 1e-12,
            "trial {trial}: exact {exact}, mc {} +- {}",
            est.value,
            est.stderr
        );
    }
}

#[test]
fn mc_volume_of_cube_and_ball() {
    let stream = SeededStream::new(3, "bodies/mc");
    let square = unit_cube(2);
    let est = square.volume_mc(50_000, &stream.substream("square")).unwrap();
    assert!((est.value - 1.0).abs() <= 3.0 * est.stderr + 1e-12);

    let ball = Body::Ball { center: vec![0.0; 3], radius: 1.0 };
    let est = ball.volume_mc(50_000, &stream.substream("ball")).unwrap();
    let truth = 4.0 * std::f64::consts::PI / 3.0;
    assert!((est.value - truth).abs() <= 3.0 * est.stderr);
}

#[test]
fn mc_volume_of_polytope_sum_against_hull_oracle() {
    // [0,1]^2 + standard 2-simplex: compare against the shoelace area of
    // the hull of pairwise vertex sums
    let sum = unit_cube(2).minkowski_sum(&standard_simplex(2)).unwrap();
    let verts = match &sum {
        Body::VPolytope { vertices } => vertices.clone(),
        other => panic!("expected a vertex polytope, got {other:?}"),
    };
    let oracle = hull_area(&verts);
    let est = sum.volume_mc(120_000, &SeededStream::new(11, "bodies/hull")).unwrap();
    assert!(
        (est.value - oracle).abs() <= 3.0 * est.stderr,
        "mc {} +- {} vs oracle {oracle}",
        est.value,
        est.stderr
    );
}

#[test]
fn difference_body_of_simplex_is_sharp() {
    // |Simplex - Simplex| = C(2n, n) |Simplex| at every n: the hexagon
    // oracle pins the 2D case exactly, MC confirms it
    let simplex = standard_simplex(2);
    let diff = simplex.difference_body().unwrap();
    let verts = match &diff {
        Body::VPolytope { vertices } => vertices.clone(),
        other => panic!("expected a vertex polytope, got {other:?}"),
    };
    let hexagon = hull_2d(&verts);
    assert_eq!(hexagon.len(), 6);
    let oracle = polygon_area(&hexagon);
    assert!((oracle - 3.0).abs() < 1e-12, "hexagon area should be 3, got {oracle}");
    assert!((gen_binomial(4.0, 2) * simplex.volume_exact().unwrap() - 3.0).abs() < 1e-12);

    let est = diff.volume_mc(150_000, &SeededStream::new(13, "bodies/hexagon")).unwrap();
    assert!((est.value - 3.0).abs() <= 3.0 * est.stderr);
}

#[test]
fn box_ball_sum_volume_matches_mc() {
    // Steiner closed form for square + disk vs hit-or-miss
    let sum = centered_cube(2)
        .minkowski_sum(&Body::Ball { center: vec![0.0, 0.0], radius: 0.4 })
        .unwrap();
    let exact = sum.volume_exact().unwrap();
    let expect = 1.0 + 4.0 * 0.4 + std::f64::consts::PI * 0.16;
    assert!((exact - expect).abs() < 1e-12);
    let est = sum.volume_mc(100_000, &SeededStream::new(17, "bodies/steiner")).unwrap();
    assert!((est.value - exact).abs() <= 3.0 * est.stderr);
}

// A partner class whose Minkowski sum with `a` keeps an exact or LP
// membership oracle (balls only pair with balls and boxes).
fn compatible_partner(a: &Body, n: usize, which: usize, stream: &mut SeededStream) -> Body {
    if matches!(a, Body::Ball { .. }) {
        random_body(n, which % 2, stream) // box or ball
    } else {
        random_body(n, [0, 2, 3][which % 3], stream) // polytopes
    }
}

#[test]
fn brunn_minkowski_on_mc_instances() {
    let mut stream = SeededStream::new(19, "bodies/bm");
    for trial in 0..12 {
        let n = 1 + trial % 3;
        let a = random_body(n, trial, &mut stream);
        let b = compatible_partner(&a, n, trial + 2, &mut stream);
        let sum = a.minkowski_sum(&b).unwrap();
        let nf = n as f64;
        let vol = |body: &Body, label: &str| -> (f64, f64) {
            match body.volume_exact() {
                Ok(v) => (v, 0.0),
                Err(_) => {
                    let e = body
                        .volume_mc(20_000, &stream.substream(&format!("{label}/{trial}")))
                        .unwrap();
                    (e.value, e.stderr)
                }
            }
        };
        let (va, ea) = vol(&a, "a");
        let (vb, eb) = vol(&b, "b");
        let (vs, es) = vol(&sum, "s");
        let lhs = va.powf(1.0 / nf) + vb.powf(1.0 / nf);
        let rhs = vs.powf(1.0 / nf);
        // first-order error propagation through the n-th roots
        let err = |v: f64, e: f64| if e > 0.0 { v.powf(1.0 / nf) * e / (nf * v) } else { 0.0 };
        let sigma = (err(va, ea).powi(2) + err(vb, eb).powi(2) + err(vs, es).powi(2)).sqrt();
        assert!(
            rhs - lhs >= -3.0 * sigma,
            "Brunn-Minkowski violated on trial {trial}: {rhs} < {lhs} (sigma {sigma})"
        );
    }
}

#[test]
fn brunn_minkowski_equality_for_homothetic_boxes() {
    for n in 1..=4 {
        let sides: Vec<f64> = (0..n).map(|i| 1.0 + 0.3 * i as f64).collect();
        let a = Body::Box {
            lo: vec![0.0; n],
            hi: sides.iter().map(|s| 2.0 * s).collect(),
        };
        let b = Body::Box { lo: vec![0.0; n], hi: sides.iter().map(|s| 3.0 * s).collect() };
        let sum = a.minkowski_sum(&b).unwrap();
        let nf = n as f64;
        let lhs = a.volume_exact().unwrap().powf(1.0 / nf)
            + b.volume_exact().unwrap().powf(1.0 / nf);
        let rhs = sum.volume_exact().unwrap().powf(1.0 / nf);
        assert!((lhs - rhs).abs() < 1e-10 * rhs);
    }
}

#[test]
fn rogers_shephard_difference_bound_on_random_bodies() {
    let mut stream = SeededStream::new(23, "bodies/rs");
    for trial in 0..10 {
        let n = 1 + trial % 3;
        let a = random_body(n, trial, &mut stream);
        let diff = a.difference_body().unwrap();
        let (va, ea) = match a.volume_exact() {
            Ok(v) => (v, 0.0),
            Err(_) => {
                let e = a.volume_mc(20_000, &stream.substream(&format!("a/{trial}"))).unwrap();
                (e.value, e.stderr)
            }
        };
        let (vd, ed) = match diff.volume_exact() {
            Ok(v) => (v, 0.0),
            Err(_) => {
                let e = diff.volume_mc(20_000, &stream.substream(&format!("d/{trial}"))).unwrap();
                (e.value, e.stderr)
            }
        };
        let c = gen_binomial(2.0 * n as f64, n as u32);
        let slack = c * va - vd;
        let sigma = (c * ea).hypot(ed);
        assert!(slack >= -3.0 * sigma, "trial {trial}: |A-A| = {vd} > C|A| = {}", c * va);
    }
}

#[test]
fn every_sampled_point_is_contained() {
    let mut stream = SeededStream::new(29, "bodies/sample-contains");
    for trial in 0..16 {
        let n = 1 + trial % 3;
        let body = random_body(n, trial, &mut stream);
        let pts = body
            .sample_uniform_batch(300, &mut stream.substream(&format!("draw/{trial}")))
            .unwrap();
        for p in &pts {
            assert!(body.contains(p).unwrap(), "sampled point {p:?} outside {body:?}");
        }
    }
    // sum and linear-image variants too
    let sum = Body::Sum {
        parts: vec![unit_cube(2), standard_simplex(2)],
    };
    let mut s = SeededStream::new(31, "bodies/sum-sample");
    for p in sum.sample_uniform_batch(300, &mut s).unwrap() {
        assert!(sum.contains(&p).unwrap());
    }
}

#[test]
fn sample_mean_and_variance_of_cubes() {
    let mut stream = SeededStream::new(37, "bodies/moments");
    // empirical mean of [0,1]^2 near (1/2, 1/2)
    let pts = unit_cube(2).sample_uniform_batch(100_000, &mut stream).unwrap();
    let count = pts.len() as f64;
    for i in 0..2 {
        let mean: f64 = pts.iter().map(|p| p[i]).sum::<f64>() / count;
        let var: f64 = pts.iter().map(|p| (p[i] - mean) * (p[i] - mean)).sum::<f64>() / count;
        let stderr = (var / count).sqrt();
        assert!((mean - 0.5).abs() <= 3.0 * stderr);
    }
    // per-axis variance of [-1/2, 1/2]^3 near 1/12
    let pts = centered_cube(3).sample_uniform_batch(100_000, &mut stream).unwrap();
    for i in 0..3 {
        let mean: f64 = pts.iter().map(|p| p[i]).sum::<f64>() / count;
        let var: f64 = pts.iter().map(|p| (p[i] - mean) * (p[i] - mean)).sum::<f64>() / count;
        // stderr of a variance estimate: sd(x^2)/sqrt(N), x^2 has var ~ 1/180 - 1/144
        let sd4: f64 = pts
            .iter()
            .map(|p| {
                let c = (p[i] - mean) * (p[i] - mean) - var;
                c * c
            })
            .sum::<f64>()
            / count;
        let stderr = (sd4 / count).sqrt();
        assert!((var - 1.0 / 12.0).abs() <= 3.0 * stderr, "axis {i}: var {var}");
    }
}

#[test]
fn intersection_volume_examples() {
    let stream = SeededStream::new(41, "bodies/intersection");
    // identical squares
    let sq = unit_cube(2);
    let est = intersection_volume_mc(&sq, &sq, 50_000, &stream.substream("same")).unwrap();
    assert!((est.value - 1.0).abs() <= 3.0 * est.stderr + 1e-12);

    // disjoint translates
    let shifted = sq.translate(&[5.0, 5.0]).unwrap();
    let est = intersection_volume_mc(&sq, &shifted, 10_000, &stream.substream("disjoint")).unwrap();
    assert_eq!(est.value, 0.0);

    // unit square vs concentric disk of area 1: quadrature oracle
    let r = (1.0 / std::f64::consts::PI).sqrt();
    let disk = Body::Ball { center: vec![0.5, 0.5], radius: r };
    let est = intersection_volume_mc(&sq, &disk, 200_000, &stream.substream("lens")).unwrap();
    let oracle = 2.0
        * simpson(
            |x| {
                let dx: f64 = x - 0.5;
                (r * r - dx * dx).max(0.0).sqrt().min(0.5)
            },
            0.0,
            1.0,
            4_000,
        );
    assert!(
        (est.value - oracle).abs() <= 3.0 * est.stderr,
        "lens mc {} +- {} vs oracle {oracle}",
        est.value,
        est.stderr
    );
}

#[test]
fn scale_to_unit_volume_on_zonotopes() {
    let mut stream = SeededStream::new(43, "bodies/scale");
    for _trial in 0..8 {
        let z = seeded_zonotope(2, 3, &mut stream);
        let unit = z.scale_to_unit_volume().unwrap();
        assert!((unit.volume_exact().unwrap() - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn hit_and_run_fallback_reaches_thin_bodies() {
    // a long thin zonotope defeats bounding-box rejection in reasonable
    // time only via the walk; just verify samples are valid
    let thin = Body::Zonotope {
        center: vec![0.0, 0.0],
        generators: vec![vec![40.0, 0.0], vec![39.0, 0.05], vec![0.0, 0.02]],
    };
    let mut stream = SeededStream::new(47, "bodies/walk");
    let pts = thin.sample_uniform_batch(5, &mut stream).unwrap();
    for p in &pts {
        assert!(thin.contains(p).unwrap());
    }
}

#[test]
fn body_json_round_trip() {
    let bodies = vec![
        unit_cube(2),
        Body::Ball { center: vec![1.0, 2.0], radius: 0.5 },
        standard_simplex(3),
        Body::Zonotope { center: vec![0.0, 0.0], generators: vec![vec![1.0, 0.0]] },
        Body::Ellipsoid { center: vec![0.0, 0.0], shape: SquareMatrix::from_diag(&[4.0, 1.0]) },
    ];
    for b in bodies {
        let json = serde_json::to_string(&b).unwrap();
        let back: Body = serde_json::from_str(&json).unwrap();
        assert_eq!(format!("{b:?}"), format!("{back:?}"));
    }
    // the documented literal format
    let parsed: Body = serde_json::from_str(r#"{"type":"box","lo":[0,0],"hi":[1,1]}"#).unwrap();
    assert!(parsed.contains(&[0.5, 0.5]).unwrap());
}
