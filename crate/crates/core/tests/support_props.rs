//! Essential-support verification: level-set correctness at the boundary,
//! the mass floors for convex and log-concave families, the volume
//! bracket, and the typical-set ratio.

mod common;

use common::*;
use entrovol::checks::Verdict;
use entrovol::measures::Density;
use entrovol::rng::SeededStream;
use entrovol::special::normal_cdf;
use entrovol::support::{
    c0_convex, c0_logconcave, check_support_volume, essential_support, support_mass_mc,
    typset_ratio, SupportRegion,
};

// Boundary points of K_f per family, where f should equal c0^n ||f|| to
// 1e-8 relative accuracy.
#[test]
fn level_set_boundary_values() {
    let mut stream = SeededStream::new(131, "support/boundary");
    let c0 = 0.37;

    // Gaussian: ellipsoid surface (x - mu)^T Sigma^{-1} (x - mu) = 2n ln(1/c0)
    let cov = entrovol::linalg::SquareMatrix::from_rows(&[vec![2.0, 0.3], vec![0.3, 1.0]]);
    let g = Density::gaussian(vec![0.5, -1.0], cov.clone()).unwrap();
    let es = essential_support(&g, c0).unwrap();
    let half = cov.sym_sqrt().unwrap();
    let t = (2.0 * 2.0 * (1.0 / c0).ln()).sqrt();
    for _ in 0..50 {
        let raw = [stream.gaussian(), stream.gaussian()];
        let len = (raw[0] * raw[0] + raw[1] * raw[1]).sqrt();
        if len < 1e-9 {
            continue;
        }
        let dir = [raw[0] / len * t, raw[1] / len * t];
        let offset = half.matvec(&dir);
        let x = [0.5 + offset[0], -1.0 + offset[1]];
        let f = g.density_eval(&x).unwrap();
        assert!(
            (f - es.level).abs() <= 1e-8 * es.level,
            "gaussian boundary: f = {f}, level = {}",
            es.level
        );
    }

    // Exponential and Pareto: the face sum x = side of the level simplex
    let families: Vec<Density> = vec![
        Density::exponential_orthant(2, 1.3).unwrap(),
        Density::pareto_orthant(2, 6.0).unwrap(),
    ];
    for d in &families {
        let es = essential_support(d, c0).unwrap();
        let body = es.region.as_body().unwrap();
        let (_, hi) = body.bounding_box();
        let side = hi[0];
        for _ in 0..50 {
            let u = stream.uniform();
            let x = [side * u, side * (1.0 - u)];
            let f = d.density_eval(&x).unwrap();
            assert!(
                (f - es.level).abs() <= 1e-8 * es.level,
                "{d:?} boundary: f = {f}, level = {}",
                es.level
            );
        }
    }

    // PowerSimplex: inner shell boundary sum x = c0^{n kt}
    let ps = Density::power_simplex(2, 1.5).unwrap();
    let es = essential_support(&ps, c0).unwrap();
    let lower = match es.region {
        SupportRegion::SimplexShell { lower, .. } => lower,
        _ => panic!("expected a shell"),
    };
    for _ in 0..50 {
        let u = stream.uniform();
        let x = [lower * u, lower * (1.0 - u)];
        let f = ps.density_eval(&x).unwrap();
        assert!((f - es.level).abs() <= 1e-8 * es.level);
    }
}

#[test]
fn convex_mass_floor_on_pareto_instances() {
    // beta >= max(n+1, beta0 n) with beta0 > 1: mass of K_f at least 1/2
    let stream = SeededStream::new(137, "support/mass-cvx");
    for (n, beta0) in [(1usize, 1.5f64), (2, 3.0), (2, 1.2), (3, 2.0)] {
        let beta = (n as f64 + 1.0).max(beta0 * n as f64) + 0.5;
        let d = Density::pareto_orthant(n, beta).unwrap();
        let c0 = c0_convex(beta0).unwrap();
        let es = essential_support(&d, c0).unwrap();
        let mass = support_mass_mc(&d, &es, 40_000, &stream.substream(&format!("{n}/{beta0}")))
            .unwrap();
        assert!(
            mass.value >= 0.5 - 3.0 * mass.stderr,
            "n={n} beta0={beta0}: mass {} +- {}",
            mass.value,
            mass.stderr
        );
    }
}

#[test]
fn log_concave_mass_floor() {
    // c0 = e^{-8}: mass at least 1 - (1/5)^n
    let stream = SeededStream::new(139, "support/mass-lc");
    let (c0, c1) = c0_logconcave();
    let cases: Vec<Density> = vec![
        Density::standard_gaussian(1),
        Density::standard_gaussian(2),
        Density::exponential_orthant(2, 1.0).unwrap(),
        Density::uniform(centered_cube(3)),
    ];
    for d in &cases {
        let n = d.dim();
        let es = essential_support(d, c0).unwrap();
        let mass = support_mass_mc(d, &es, 60_000, &stream.substream(&format!("{d:?}"))).unwrap();
        let floor = 1.0 - c1.powi(n as i32);
        assert!(
            mass.value >= floor - 3.0 * mass.stderr,
            "{d:?}: mass {} vs floor {floor}",
            mass.value
        );
    }
}

#[test]
fn gaussian_essential_support_mass_matches_cdf() {
    // K_f = [-4, 4] for the standard 1D Gaussian at c0 = e^{-8}
    let (c0, _) = c0_logconcave();
    let d = Density::standard_gaussian(1);
    let es = essential_support(&d, c0).unwrap();
    let mass = support_mass_mc(&d, &es, 200_000, &SeededStream::new(149, "support/cdf")).unwrap();
    let truth = normal_cdf(4.0) - normal_cdf(-4.0);
    assert!(
        (mass.value - truth).abs() <= 3.0 * mass.stderr,
        "mass {} +- {} vs Phi oracle {truth}",
        mass.value,
        mass.stderr
    );
    assert!(mass.value > 0.8); // exceeds 1 - 1/5 at n = 1
}

#[test]
fn volume_bracket_5n() {
    let stream = SeededStream::new(151, "support/5n");
    // exact simplex volumes for the orthant families
    let cases: Vec<(Density, f64)> = vec![
        (Density::exponential_orthant(2, 1.0).unwrap(), c0_logconcave().0),
        (Density::pareto_orthant(2, 6.0).unwrap(), c0_convex(3.0).unwrap()),
        (Density::uniform(unit_cube(2)), 0.5),
    ];
    for (d, c0) in &cases {
        let es = essential_support(d, *c0).unwrap();
        let recs =
            check_support_volume(d, &es, 50_000, &stream.substream(&format!("{d:?}"))).unwrap();
        assert_eq!(recs.len(), 2);
        for r in &recs {
            assert_eq!(r.verdict, Verdict::Pass, "{} failed: {r:?}", r.name);
        }
    }
    // the exponential closed form: |K_f| = (n ln(1/c0))^n / n! = 128 at n=2
    let d = Density::exponential_orthant(2, 1.0).unwrap();
    let es = essential_support(&d, c0_logconcave().0).unwrap();
    assert!((es.region.volume_exact().unwrap() - 128.0).abs() < 1e-10);

    // MC path: power-simplex shell has no exact volume
    let ps = Density::power_simplex(2, 1.0).unwrap();
    let es = essential_support(&ps, 0.8).unwrap();
    let recs = check_support_volume(&ps, &es, 150_000, &stream.substream("shell")).unwrap();
    for r in &recs {
        assert_eq!(r.verdict, Verdict::Pass, "{} failed: {r:?}", r.name);
        assert!(r.stderr > 0.0);
    }
}

#[test]
fn pareto_5n_with_mc_cross_check() {
    // the simplex level set volume agrees with hit-or-miss
    let d = Density::pareto_orthant(2, 6.0).unwrap();
    let es = essential_support(&d, 0.5).unwrap();
    let exact = es.region.volume_exact().unwrap();
    let mc = es.region.volume_mc(100_000, &SeededStream::new(157, "support/mc")).unwrap();
    assert!((mc.value - exact).abs() <= 3.0 * mc.stderr);
}

#[test]
fn typset_ratio_examples() {
    let stream = SeededStream::new(163, "support/typset");
    // uniform of volume 1: H = 1, |K_f| = 1, ratio 1
    let u = Density::uniform(unit_cube(2));
    let es = essential_support(&u, 0.5).unwrap();
    let ratio = typset_ratio(&u, &es, 10_000, &stream.substream("uniform")).unwrap();
    assert!((ratio.value - 1.0).abs() < 1e-12);

    // exponential n = 2: H = e^2, |K_f|^{2/n} = 128
    let e = Density::exponential_orthant(2, 1.0).unwrap();
    let es = essential_support(&e, c0_logconcave().0).unwrap();
    let ratio = typset_ratio(&e, &es, 10_000, &stream.substream("exp")).unwrap();
    let truth = (2.0f64).exp().exp() / 128.0; // e^2 entropy power over 128
    let expect = (2.0f64 * 2.0 / 2.0).exp() / 128.0;
    assert!((ratio.value - expect).abs() < 1e-10, "{} vs {expect} ({truth})", ratio.value);

    // across a beta sweep: positive, finite, and inside the bracket the
    // volume and max-density relations force, c0^2 <= ratio <= 4 H ||f||^{2/n}
    // (the bracketing constants themselves are existential)
    let c0 = c0_convex(3.0).unwrap();
    for beta in [6.0, 8.0, 10.0] {
        let d = Density::pareto_orthant(2, beta).unwrap();
        let es = essential_support(&d, c0).unwrap();
        let r = typset_ratio(&d, &es, 40_000, &stream.substream(&format!("b{beta}"))).unwrap();
        assert!(r.value.is_finite() && r.value > 0.0);
        let h = entrovol::checks::entropy_of(
            &d,
            &entrovol::checks::Budget { samples: 40_000, inner_m: 64 },
            &stream.substream(&format!("h{beta}")),
        )
        .unwrap();
        let upper = 4.0 * h.power() * d.max_density().unwrap().powf(1.0);
        assert!(
            r.value >= c0 * c0 * 0.99 && r.value <= upper * 1.2,
            "beta {beta}: ratio {} outside [{}, {upper}]",
            r.value,
            c0 * c0
        );
    }
}
