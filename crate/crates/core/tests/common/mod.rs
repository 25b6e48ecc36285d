//! Shared test oracles: 2D convex hull and polygon area, 1D quadrature,
//! Kolmogorov-Smirnov distance. These stay independent of the library's
//! own volume and entropy paths.

#![allow(dead_code)]

use entrovol::bodies::Body;

/// Andrew monotone chain; returns hull vertices in counterclockwise order.
pub fn hull_2d(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts.into_iter().map(|(x, y)| vec![x, y]).collect();
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.into_iter().map(|(x, y)| vec![x, y]).collect()
}

/// Shoelace area of a simple polygon given in order.
pub fn polygon_area(vertices: &[Vec<f64>]) -> f64 {
    let n = vertices.len();
    let mut twice = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        twice += vertices[i][0] * vertices[j][1] - vertices[j][0] * vertices[i][1];
    }
    twice.abs() / 2.0
}

/// Exact area of the convex hull of a 2D point cloud.
pub fn hull_area(points: &[Vec<f64>]) -> f64 {
    polygon_area(&hull_2d(points))
}

/// Composite Simpson quadrature on [a, b].
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = if intervals % 2 == 0 { intervals } else { intervals + 1 };
    let h = (b - a) / n as f64;
    let mut total = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        total += w * f(a + i as f64 * h);
    }
    total * h / 3.0
}

/// Kolmogorov-Smirnov distance between a sample and a CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_by(|a, b| a.total_cmp(b));
    let n = samples.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let c = cdf(x);
        worst = worst.max((c - i as f64 / n).abs());
        worst = worst.max(((i as f64 + 1.0) / n - c).abs());
    }
    worst
}

pub fn unit_cube(n: usize) -> Body {
    Body::Box { lo: vec![0.0; n], hi: vec![1.0; n] }
}

pub fn centered_cube(n: usize) -> Body {
    Body::Box { lo: vec![-0.5; n], hi: vec![0.5; n] }
}

pub fn standard_simplex(n: usize) -> Body {
    let mut vertices = vec![vec![0.0; n]];
    for i in 0..n {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        vertices.push(v);
    }
    Body::Simplex { vertices }
}
