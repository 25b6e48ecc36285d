//! Convex body representations: support functions, membership, Minkowski
//! sums, exact and hit-or-miss volumes, and uniform sampling.
//!
//! Bodies are immutable values. Monte Carlo estimators split their sample
//! budget over a fixed number of substream slots, so results do not depend
//! on how many threads actually run.

use crate::linalg::{dot, norm, SquareMatrix};
use crate::lp::{feasible_eq, lp_point_in_hull};
use crate::rng::SeededStream;
use crate::special::ball_volume;
use crate::{Error, Result, MAX_MC_DIM, TOL_LP};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// A Monte Carlo value with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, stderr: 0.0, samples: 0 }
    }

    /// Hit-or-miss estimate: `hits / total`, scaled by the measure of the
    /// proposal region, with the binomial standard error.
    pub fn from_hits(hits: usize, total: usize, scale: f64) -> Self {
        let p = hits as f64 / total as f64;
        Estimate {
            value: p * scale,
            stderr: scale * (p * (1.0 - p) / total as f64).sqrt(),
            samples: total,
        }
    }
}

/// A convex body in R^n.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Body {
    /// Axis-aligned box given by per-axis intervals.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    /// `{ x : (x-c)^T S^{-1} (x-c) <= 1 }` with S symmetric positive definite.
    Ellipsoid { center: Vec<f64>, shape: SquareMatrix },
    /// n+1 affinely independent vertices.
    Simplex { vertices: Vec<Vec<f64>> },
    /// Convex hull of a finite vertex list.
    VPolytope { vertices: Vec<Vec<f64>> },
    /// `{ c + sum t_i g_i : t_i in [0,1] }`.
    Zonotope { center: Vec<f64>, generators: Vec<Vec<f64>> },
    /// Minkowski sum of the children.
    Sum { parts: Vec<Body> },
    /// Image of `body` under the linear map `map`.
    LinearImage { map: SquareMatrix, body: Box<Body> },
}

// Rejection sampling gives up after this many tries per point and switches
// to hit-and-run.
const REJECTION_CAP: usize = 2_000;
const HIT_AND_RUN_BURN_IN: usize = 1_000;
const MC_SLOTS: usize = 16;

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::Box { lo, .. } => lo.len(),
            Body::Ball { center, .. } => center.len(),
            Body::Ellipsoid { center, .. } => center.len(),
            Body::Simplex { vertices } | Body::VPolytope { vertices } => vertices[0].len(),
            Body::Zonotope { center, .. } => center.len(),
            Body::Sum { parts } => parts[0].dim(),
            Body::LinearImage { body, .. } => body.dim(),
        }
    }

    /// Support function `h_A(d) = sup_{x in A} <x, d>` with `d` normalized
    /// internally to a unit vector.
    pub fn support_function(&self, direction: &[f64]) -> f64 {
        let len = norm(direction);
        assert!(len > 0.0, "support direction must be nonzero");
        let unit: Vec<f64> = direction.iter().map(|d| d / len).collect();
        self.support_raw(&unit)
    }

    // Positively homogeneous, so callers that already hold a unit vector
    // can skip normalization.
    fn support_raw(&self, d: &[f64]) -> f64 {
        match self {
            Body::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .zip(d)
                .map(|((&l, &h), &di)| (l * di).max(h * di))
                .sum(),
            Body::Ball { center, radius } => dot(center, d) + radius * norm(d),
            Body::Ellipsoid { center, shape } => {
                let sd = shape.matvec(d);
                dot(center, d) + dot(d, &sd).max(0.0).sqrt()
            }
            Body::Simplex { vertices } | Body::VPolytope { vertices } => vertices
                .iter()
                .map(|v| dot(v, d))
                .fold(f64::NEG_INFINITY, f64::max),
            Body::Zonotope { center, generators } => {
                dot(center, d) + generators.iter().map(|g| dot(g, d).max(0.0)).sum::<f64>()
            }
            Body::Sum { parts } => parts.iter().map(|p| p.support_raw(d)).sum(),
            Body::LinearImage { map, body } => body.support_raw(&map.matvec_t(d)),
        }
    }

    /// Tight axis-aligned bounding box, from support values on the +-axis
    /// directions.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim();
        let mut lo = vec![0.0; n];
        let mut hi = vec![0.0; n];
        let mut e = vec![0.0; n];
        for i in 0..n {
            e[i] = 1.0;
            hi[i] = self.support_raw(&e);
            e[i] = -1.0;
            lo[i] = -self.support_raw(&e);
            e[i] = 0.0;
        }
        (lo, hi)
    }

    /// Exact membership up to the LP tolerance.
    ///
    /// `Sum` bodies support membership only when every child is
    /// vertex-representable (the joint feasibility program
    /// `x = sum_c sum_j w_j^c v_j^c`, one convexity row per child);
    /// otherwise the oracle is unavailable and callers must work through
    /// sampling of summand laws instead.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch(n, x.len()));
        }
        match self {
            Body::Box { lo, hi } => Ok(lo
                .iter()
                .zip(hi)
                .zip(x)
                .all(|((&l, &h), &xi)| xi >= l - TOL_LP && xi <= h + TOL_LP)),
            Body::Ball { center, radius } => {
                let d: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
                Ok(norm(&d) <= radius + TOL_LP)
            }
            Body::Ellipsoid { center, shape } => {
                let d: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
                let y = shape.solve(&d)?;
                Ok(dot(&d, &y) <= 1.0 + TOL_LP)
            }
            Body::Simplex { vertices } => {
                // barycentric coordinates by a direct linear solve
                let v0 = &vertices[0];
                let mut a = SquareMatrix::zeros(n);
                for j in 1..=n {
                    for i in 0..n {
                        a[(i, j - 1)] = vertices[j][i] - v0[i];
                    }
                }
                let rhs: Vec<f64> = x.iter().zip(v0).map(|(a, b)| a - b).collect();
                let w = a.solve(&rhs)?;
                let sum: f64 = w.iter().sum();
                Ok(w.iter().all(|&wi| wi >= -TOL_LP) && sum <= 1.0 + TOL_LP)
            }
            Body::VPolytope { vertices } => lp_point_in_hull(x, vertices),
            Body::Zonotope { center, generators } => {
                // feasibility of G t = x - c with t in [0,1]^m via slacks
                let m = generators.len();
                let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + m);
                let mut b: Vec<f64> = Vec::with_capacity(n + m);
                for i in 0..n {
                    let mut row = vec![0.0; 2 * m];
                    for (j, g) in generators.iter().enumerate() {
                        row[j] = g[i];
                    }
                    rows.push(row);
                    b.push(x[i] - center[i]);
                }
                for j in 0..m {
                    let mut row = vec![0.0; 2 * m];
                    row[j] = 1.0;
                    row[m + j] = 1.0;
                    rows.push(row);
                    b.push(1.0);
                }
                Ok(feasible_eq(&rows, &b, TOL_LP))
            }
            Body::Sum { parts } => {
                if let Some((bx, center, radius)) = as_box_ball_sum(parts) {
                    if let Body::Box { lo, hi } = bx {
                        let shifted: Vec<f64> =
                            x.iter().zip(&center).map(|(a, b)| a - b).collect();
                        return Ok(box_distance(lo, hi, &shifted) <= radius + TOL_LP);
                    }
                }
                let lists: Option<Vec<Vec<Vec<f64>>>> =
                    parts.iter().map(|p| p.vertex_list()).collect();
                let lists = lists.ok_or(Error::OracleUnavailable(
                    "Minkowski-sum membership needs vertex-representable children; \
                     use sampling of the summand laws instead",
                ))?;
                let total: usize = lists.iter().map(|l| l.len()).sum();
                let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + lists.len());
                for i in 0..n {
                    let mut row = Vec::with_capacity(total);
                    for list in &lists {
                        row.extend(list.iter().map(|v| v[i]));
                    }
                    rows.push(row);
                }
                let mut offset = 0;
                for list in &lists {
                    let mut row = vec![0.0; total];
                    for j in 0..list.len() {
                        row[offset + j] = 1.0;
                    }
                    rows.push(row);
                    offset += list.len();
                }
                let mut b = x.to_vec();
                b.extend(std::iter::repeat(1.0).take(lists.len()));
                Ok(feasible_eq(&rows, &b, TOL_LP))
            }
            Body::LinearImage { map, body } => {
                let y = map.solve(x)?;
                body.contains(&y)
            }
        }
    }

    /// Vertex list when the variant is (cheaply) vertex-representable.
    pub fn vertex_list(&self) -> Option<Vec<Vec<f64>>> {
        const CAP: usize = 4096;
        match self {
            Body::Box { lo, hi } => {
                let n = lo.len();
                if n > 12 {
                    return None;
                }
                let mut out = Vec::with_capacity(1 << n);
                for mask in 0..1usize << n {
                    out.push(
                        (0..n)
                            .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
                            .collect(),
                    );
                }
                Some(out)
            }
            Body::Simplex { vertices } | Body::VPolytope { vertices } => Some(vertices.clone()),
            Body::Zonotope { center, generators } => {
                let m = generators.len();
                if m > 12 {
                    return None;
                }
                // corners of the parameter cube; a superset of the vertices,
                // which is all the hull oracles need
                let mut out = Vec::with_capacity(1 << m);
                for mask in 0..1usize << m {
                    let mut v = center.clone();
                    for (j, g) in generators.iter().enumerate() {
                        if mask >> j & 1 == 1 {
                            for (vi, gi) in v.iter_mut().zip(g) {
                                *vi += gi;
                            }
                        }
                    }
                    out.push(v);
                }
                Some(out)
            }
            Body::Ball { .. } | Body::Ellipsoid { .. } => None,
            Body::Sum { parts } => {
                let lists: Option<Vec<Vec<Vec<f64>>>> =
                    parts.iter().map(|p| p.vertex_list()).collect();
                let lists = lists?;
                if lists.iter().map(|l| l.len()).product::<usize>() > CAP {
                    return None;
                }
                let mut acc: Vec<Vec<f64>> = vec![vec![0.0; self.dim()]];
                for list in &lists {
                    let mut next = Vec::with_capacity(acc.len() * list.len());
                    for a in &acc {
                        for v in list {
                            next.push(a.iter().zip(v).map(|(x, y)| x + y).collect());
                        }
                    }
                    acc = next;
                }
                Some(acc)
            }
            Body::LinearImage { map, body } => {
                let list = body.vertex_list()?;
                Some(list.iter().map(|v| map.matvec(v)).collect())
            }
        }
    }

    /// A point in the (relative) interior, cheap per variant.
    pub fn interior_point(&self) -> Vec<f64> {
        match self {
            Body::Box { lo, hi } => lo.iter().zip(hi).map(|(l, h)| 0.5 * (l + h)).collect(),
            Body::Ball { center, .. } | Body::Ellipsoid { center, .. } => center.clone(),
            Body::Simplex { vertices } | Body::VPolytope { vertices } => {
                let n = vertices[0].len();
                let mut c = vec![0.0; n];
                for v in vertices {
                    for i in 0..n {
                        c[i] += v[i];
                    }
                }
                c.iter().map(|x| x / vertices.len() as f64).collect()
            }
            Body::Zonotope { center, generators } => {
                let mut c = center.clone();
                for g in generators {
                    for (ci, gi) in c.iter_mut().zip(g) {
                        *ci += 0.5 * gi;
                    }
                }
                c
            }
            Body::Sum { parts } => {
                let n = self.dim();
                let mut c = vec![0.0; n];
                for p in parts {
                    for (ci, pi) in c.iter_mut().zip(p.interior_point()) {
                        *ci += pi;
                    }
                }
                c
            }
            Body::LinearImage { map, body } => map.matvec(&body.interior_point()),
        }
    }

    /// Minkowski sum, collapsing to a closed-form variant when one exists.
    ///
    /// Nested sums are flattened and the parts fused greedily: exact
    /// structure-preserving fusions first (box+box, homothetic balls and
    /// ellipsoids, zonotopal pairs), pairwise vertex sums for small
    /// polytope pairs last. Whatever cannot fuse stays a `Sum` node.
    pub fn minkowski_sum(&self, other: &Body) -> Result<Body> {
        let n = self.dim();
        if other.dim() != n {
            return Err(Error::DimensionMismatch(n, other.dim()));
        }
        let mut parts = Vec::new();
        self.collect_parts(&mut parts);
        other.collect_parts(&mut parts);
        fuse_round(&mut parts, fuse_pair_strong);
        fuse_round(&mut parts, fuse_pair_vertices);
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Body::Sum { parts } })
    }

    fn collect_parts(&self, out: &mut Vec<Body>) {
        match self {
            Body::Sum { parts } => {
                for p in parts {
                    p.collect_parts(out);
                }
            }
            other => out.push(other.clone()),
        }
    }

    // Balls are ellipsoids with shape r^2 I; used to fuse ellipsoid sums.
    fn as_ellipsoid(&self) -> Option<(Vec<f64>, SquareMatrix)> {
        match self {
            Body::Ellipsoid { center, shape } => Some((center.clone(), shape.clone())),
            Body::Ball { center, radius } => Some((
                center.clone(),
                SquareMatrix::identity(center.len()).scale(radius * radius),
            )),
            _ => None,
        }
    }

    // Boxes are zonotopes with axis generators; used to fuse box/zonotope sums.
    fn as_zonotope(&self) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
        match self {
            Body::Zonotope { center, generators } => Some((center.clone(), generators.clone())),
            Body::Box { lo, hi } => {
                let n = lo.len();
                let mut gens = Vec::new();
                for i in 0..n {
                    let w = hi[i] - lo[i];
                    if w > 0.0 {
                        let mut g = vec![0.0; n];
                        g[i] = w;
                        gens.push(g);
                    }
                }
                Some((lo.clone(), gens))
            }
            _ => None,
        }
    }

    /// Reflect through the origin (negate all defining data).
    pub fn reflect(&self) -> Body {
        let neg = |v: &Vec<f64>| v.iter().map(|x| -x).collect::<Vec<f64>>();
        match self {
            Body::Box { lo, hi } => Body::Box { lo: neg(hi), hi: neg(lo) },
            Body::Ball { center, radius } => Body::Ball { center: neg(center), radius: *radius },
            Body::Ellipsoid { center, shape } => {
                Body::Ellipsoid { center: neg(center), shape: shape.clone() }
            }
            Body::Simplex { vertices } => {
                Body::Simplex { vertices: vertices.iter().map(neg).collect() }
            }
            Body::VPolytope { vertices } => {
                Body::VPolytope { vertices: vertices.iter().map(neg).collect() }
            }
            Body::Zonotope { center, generators } => Body::Zonotope {
                center: neg(center),
                generators: generators.iter().map(neg).collect(),
            },
            Body::Sum { parts } => Body::Sum { parts: parts.iter().map(|p| p.reflect()).collect() },
            Body::LinearImage { map, body } => {
                Body::LinearImage { map: map.scale(-1.0), body: body.clone() }
            }
        }
    }

    /// The difference body `A + (-A)`.
    pub fn difference_body(&self) -> Result<Body> {
        self.minkowski_sum(&self.reflect())
    }

    /// Exact volume for the variants that admit one.
    pub fn volume_exact(&self) -> Result<f64> {
        match self {
            Body::Box { lo, hi } => Ok(lo.iter().zip(hi).map(|(l, h)| h - l).product()),
            Body::Ball { center, radius } => Ok(ball_volume(center.len(), *radius)),
            Body::Ellipsoid { center, shape } => {
                let det = shape.det();
                if det <= 0.0 {
                    return Err(Error::NotSpd);
                }
                Ok(ball_volume(center.len(), 1.0) * det.sqrt())
            }
            Body::Simplex { vertices } => {
                let n = vertices[0].len();
                let mut e = SquareMatrix::zeros(n);
                for j in 1..=n {
                    for i in 0..n {
                        e[(i, j - 1)] = vertices[j][i] - vertices[0][i];
                    }
                }
                let mut fact = 1.0;
                for k in 2..=n {
                    fact *= k as f64;
                }
                Ok(e.det().abs() / fact)
            }
            Body::Zonotope { center, generators } => {
                let n = center.len();
                let m = generators.len();
                if m < n {
                    return Ok(0.0);
                }
                let mut total = 0.0;
                let mut idx: Vec<usize> = (0..n).collect();
                loop {
                    let mut g = SquareMatrix::zeros(n);
                    for (col, &j) in idx.iter().enumerate() {
                        for i in 0..n {
                            g[(i, col)] = generators[j][i];
                        }
                    }
                    total += g.det().abs();
                    // next n-combination of {0..m}
                    let mut i = n;
                    loop {
                        if i == 0 {
                            return Ok(total);
                        }
                        i -= 1;
                        if idx[i] != i + m - n {
                            break;
                        }
                    }
                    idx[i] += 1;
                    for j in i + 1..n {
                        idx[j] = idx[j - 1] + 1;
                    }
                }
            }
            Body::LinearImage { map, body } => Ok(map.det().abs() * body.volume_exact()?),
            Body::Sum { parts } => {
                if let Some((bx, _, radius)) = as_box_ball_sum(parts) {
                    if let Body::Box { lo, hi } = bx {
                        return Ok(box_ball_volume(lo, hi, radius));
                    }
                }
                Err(Error::ExactVolumeUnavailable)
            }
            Body::VPolytope { .. } => Err(Error::ExactVolumeUnavailable),
        }
    }

    /// Hit-or-miss volume over the tight bounding box.
    pub fn volume_mc(&self, samples: usize, stream: &SeededStream) -> Result<Estimate> {
        let n = self.dim();
        if n > MAX_MC_DIM {
            return Err(Error::DimensionCap(n));
        }
        let (lo, hi) = self.bounding_box();
        let box_vol: f64 = lo.iter().zip(&hi).map(|(l, h)| h - l).product();
        if !box_vol.is_finite() {
            return Err(Error::BadBody("unbounded body"));
        }
        if box_vol <= 0.0 {
            return Ok(Estimate::exact(0.0));
        }
        // Probe membership once so oracle errors surface before the slots run.
        self.contains(&self.interior_point())?;
        let hits = mc_slots(samples, stream, "volume", |count, sub| {
            let mut h = 0usize;
            let mut x = vec![0.0; n];
            for _ in 0..count {
                for i in 0..n {
                    x[i] = lo[i] + (hi[i] - lo[i]) * sub.uniform();
                }
                if self.contains(&x).unwrap_or(false) {
                    h += 1;
                }
            }
            h
        });
        Ok(Estimate::from_hits(hits, samples, box_vol))
    }

    /// Uniform sample. Direct constructions where possible, otherwise
    /// rejection from the bounding box with a hit-and-run fallback.
    pub fn sample_uniform(&self, stream: &mut SeededStream) -> Result<Vec<f64>> {
        Ok(self.sample_uniform_batch(1, stream)?.pop().unwrap())
    }

    /// Batch sampler; amortizes hit-and-run burn-in over the whole batch.
    pub fn sample_uniform_batch(
        &self,
        count: usize,
        stream: &mut SeededStream,
    ) -> Result<Vec<Vec<f64>>> {
        let n = self.dim();
        match self {
            Body::Box { lo, hi } => Ok((0..count)
                .map(|_| {
                    (0..n)
                        .map(|i| lo[i] + (hi[i] - lo[i]) * stream.uniform())
                        .collect()
                })
                .collect()),
            Body::Ball { center, radius } => Ok((0..count)
                .map(|_| {
                    let mut x = ball_point(n, stream);
                    for i in 0..n {
                        x[i] = center[i] + radius * x[i];
                    }
                    x
                })
                .collect()),
            Body::Ellipsoid { center, shape } => {
                let half = shape.sym_sqrt()?;
                Ok((0..count)
                    .map(|_| {
                        let u = ball_point(n, stream);
                        let y = half.matvec(&u);
                        y.iter().zip(center).map(|(a, b)| a + b).collect()
                    })
                    .collect())
            }
            Body::Simplex { vertices } => Ok((0..count)
                .map(|_| {
                    let w = exp_spacings(n + 1, stream);
                    let mut x = vec![0.0; n];
                    for (wi, v) in w.iter().zip(vertices) {
                        for i in 0..n {
                            x[i] += wi * v[i];
                        }
                    }
                    x
                })
                .collect()),
            Body::LinearImage { map, body } => {
                let inner = body.sample_uniform_batch(count, stream)?;
                Ok(inner.iter().map(|x| map.matvec(x)).collect())
            }
            _ => self.sample_by_rejection_or_walk(count, stream),
        }
    }

    fn sample_by_rejection_or_walk(
        &self,
        count: usize,
        stream: &mut SeededStream,
    ) -> Result<Vec<Vec<f64>>> {
        let n = self.dim();
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::with_capacity(count);
        let mut walk: Option<HitAndRun> = None;
        'points: for _ in 0..count {
            if walk.is_none() {
                let mut x = vec![0.0; n];
                for _ in 0..REJECTION_CAP {
                    for i in 0..n {
                        x[i] = lo[i] + (hi[i] - lo[i]) * stream.uniform();
                    }
                    if self.contains(&x)? {
                        out.push(x.clone());
                        continue 'points;
                    }
                }
                // Rejection is hopeless for this body; start a chain.
                walk = Some(HitAndRun::start(self, stream)?);
            }
            out.push(walk.as_mut().unwrap().next_sample_on(self, stream)?);
        }
        Ok(out)
    }

    /// `|A|^{-1/n} A`, scaled about the origin, using the exact volume.
    pub fn scale_to_unit_volume(&self) -> Result<Body> {
        let v = self.volume_exact()?;
        self.scale_to_unit_volume_from(v)
    }

    /// Same, but from a Monte Carlo volume estimate.
    pub fn scale_to_unit_volume_mc(&self, samples: usize, stream: &SeededStream) -> Result<Body> {
        let v = self.volume_mc(samples, stream)?.value;
        self.scale_to_unit_volume_from(v)
    }

    fn scale_to_unit_volume_from(&self, volume: f64) -> Result<Body> {
        if !(volume > 0.0) || !volume.is_finite() {
            return Err(Error::BadBody("zero or non-finite volume"));
        }
        Ok(self.scale_about_origin(volume.powf(-1.0 / self.dim() as f64)))
    }

    /// Homothety `x -> s x` about the origin, `s > 0`.
    pub fn scale_about_origin(&self, s: f64) -> Body {
        assert!(s > 0.0);
        let sv = |v: &Vec<f64>| v.iter().map(|x| s * x).collect::<Vec<f64>>();
        match self {
            Body::Box { lo, hi } => Body::Box { lo: sv(lo), hi: sv(hi) },
            Body::Ball { center, radius } => {
                Body::Ball { center: sv(center), radius: s * radius }
            }
            Body::Ellipsoid { center, shape } => {
                Body::Ellipsoid { center: sv(center), shape: shape.scale(s * s) }
            }
            Body::Simplex { vertices } => {
                Body::Simplex { vertices: vertices.iter().map(sv).collect() }
            }
            Body::VPolytope { vertices } => {
                Body::VPolytope { vertices: vertices.iter().map(sv).collect() }
            }
            Body::Zonotope { center, generators } => Body::Zonotope {
                center: sv(center),
                generators: generators.iter().map(sv).collect(),
            },
            Body::Sum { parts } => {
                Body::Sum { parts: parts.iter().map(|p| p.scale_about_origin(s)).collect() }
            }
            Body::LinearImage { map, body } => {
                Body::LinearImage { map: map.scale(s), body: body.clone() }
            }
        }
    }

    /// Translate by `t`.
    pub fn translate(&self, t: &[f64]) -> Result<Body> {
        let n = self.dim();
        if t.len() != n {
            return Err(Error::DimensionMismatch(n, t.len()));
        }
        let tv = |v: &Vec<f64>| v.iter().zip(t).map(|(x, ti)| x + ti).collect::<Vec<f64>>();
        Ok(match self {
            Body::Box { lo, hi } => Body::Box { lo: tv(lo), hi: tv(hi) },
            Body::Ball { center, radius } => Body::Ball { center: tv(center), radius: *radius },
            Body::Ellipsoid { center, shape } => {
                Body::Ellipsoid { center: tv(center), shape: shape.clone() }
            }
            Body::Simplex { vertices } => {
                Body::Simplex { vertices: vertices.iter().map(tv).collect() }
            }
            Body::VPolytope { vertices } => {
                Body::VPolytope { vertices: vertices.iter().map(tv).collect() }
            }
            Body::Zonotope { center, generators } => {
                Body::Zonotope { center: tv(center), generators: generators.clone() }
            }
            Body::Sum { parts } => {
                // shift the first child; A + t + B = (A + B) + t
                let mut parts = parts.clone();
                parts[0] = parts[0].translate(t)?;
                Body::Sum { parts }
            }
            Body::LinearImage { map, body } => {
                // u(x) + t = u(x + u^{-1} t)
                let shift = map.solve(t)?;
                Body::LinearImage { map: map.clone(), body: Box::new(body.translate(&shift)?) }
            }
        })
    }
}

/// Image of a body under a linear map, collapsing to closed-form variants
/// where the image is representable exactly.
pub fn linear_image(map: &SquareMatrix, body: &Body) -> Result<Body> {
    let n = body.dim();
    if map.order() != n {
        return Err(Error::DimensionMismatch(map.order(), n));
    }
    Ok(match body {
        Body::Ellipsoid { center, shape } => Body::Ellipsoid {
            center: map.matvec(center),
            shape: map.matmul(shape).matmul(&map.transpose()),
        },
        // u(Ball(c, r)) is the ellipsoid with shape r^2 u u^T
        Body::Ball { center, radius } => Body::Ellipsoid {
            center: map.matvec(center),
            shape: map.matmul(&map.transpose()).scale(radius * radius),
        },
        Body::Zonotope { center, generators } => Body::Zonotope {
            center: map.matvec(center),
            generators: generators.iter().map(|g| map.matvec(g)).collect(),
        },
        Body::Simplex { vertices } => Body::Simplex {
            vertices: vertices.iter().map(|v| map.matvec(v)).collect(),
        },
        Body::VPolytope { vertices } => Body::VPolytope {
            vertices: vertices.iter().map(|v| map.matvec(v)).collect(),
        },
        Body::Sum { parts } => Body::Sum {
            parts: parts
                .iter()
                .map(|p| linear_image(map, p))
                .collect::<Result<Vec<_>>>()?,
        },
        Body::LinearImage { map: inner, body } => {
            Body::LinearImage { map: map.matmul(inner), body: body.clone() }
        }
        other => Body::LinearImage { map: map.clone(), body: Box::new(other.clone()) },
    })
}

/// Hit-or-miss volume of `a` intersect `b` over the intersection of the
/// bounding boxes, using both membership oracles.
pub fn intersection_volume_mc(
    a: &Body,
    b: &Body,
    samples: usize,
    stream: &SeededStream,
) -> Result<Estimate> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch(n, b.dim()));
    }
    if n > MAX_MC_DIM {
        return Err(Error::DimensionCap(n));
    }
    let (la, ha) = a.bounding_box();
    let (lb, hb) = b.bounding_box();
    let lo: Vec<f64> = la.iter().zip(&lb).map(|(x, y)| x.max(*y)).collect();
    let hi: Vec<f64> = ha.iter().zip(&hb).map(|(x, y)| x.min(*y)).collect();
    if lo.iter().zip(&hi).any(|(l, h)| l >= h) {
        return Ok(Estimate::exact(0.0));
    }
    let box_vol: f64 = lo.iter().zip(&hi).map(|(l, h)| h - l).product();
    a.contains(&a.interior_point())?;
    b.contains(&b.interior_point())?;
    let hits = mc_slots(samples, stream, "intersection", |count, sub| {
        let mut h = 0usize;
        let mut x = vec![0.0; n];
        for _ in 0..count {
            for i in 0..n {
                x[i] = lo[i] + (hi[i] - lo[i]) * sub.uniform();
            }
            if a.contains(&x).unwrap_or(false) && b.contains(&x).unwrap_or(false) {
                h += 1;
            }
        }
        h
    });
    Ok(Estimate::from_hits(hits, samples, box_vol))
}

/// Run `work` over a fixed number of labelled slots in parallel and sum the
/// results in slot order. The slot structure (not the thread count) decides
/// the random streams, so any worker count yields identical output.
pub(crate) fn mc_slots<T, F>(samples: usize, stream: &SeededStream, tag: &str, work: F) -> T
where
    T: Send + std::iter::Sum<T>,
    F: Fn(usize, &mut SeededStream) -> T + Sync,
{
    let slots = MC_SLOTS.min(samples.max(1));
    let base = samples / slots;
    let extra = samples % slots;
    let mut jobs: Vec<(usize, SeededStream)> = (0..slots)
        .map(|s| {
            let count = base + usize::from(s < extra);
            (count, stream.substream(&format!("{tag}/slot/{s}")))
        })
        .collect();
    jobs.par_iter_mut()
        .map(|(count, sub)| work(*count, sub))
        .collect::<Vec<T>>()
        .into_iter()
        .sum()
}

// Repeatedly fuse any fusable pair until a fixed point.
fn fuse_round(parts: &mut Vec<Body>, fuse: fn(&Body, &Body) -> Option<Body>) {
    'outer: loop {
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                if let Some(fused) = fuse(&parts[i], &parts[j]) {
                    parts.swap_remove(j);
                    parts.swap_remove(i);
                    parts.push(fused);
                    continue 'outer;
                }
            }
        }
        return;
    }
}

fn fuse_pair_strong(a: &Body, b: &Body) -> Option<Body> {
    if let (Body::Box { lo: la, hi: ha }, Body::Box { lo: lb, hi: hb }) = (a, b) {
        return Some(Body::Box {
            lo: la.iter().zip(lb).map(|(x, y)| x + y).collect(),
            hi: ha.iter().zip(hb).map(|(x, y)| x + y).collect(),
        });
    }
    if let (
        Body::Ball { center: ca, radius: ra },
        Body::Ball { center: cb, radius: rb },
    ) = (a, b)
    {
        return Some(Body::Ball {
            center: ca.iter().zip(cb).map(|(x, y)| x + y).collect(),
            radius: ra + rb,
        });
    }
    if let Some(e) = proportional_ellipsoid_sum(a, b) {
        return Some(e);
    }
    if let (Some((ca, ga)), Some((cb, gb))) = (a.as_zonotope(), b.as_zonotope()) {
        // boxes participate here only against proper zonotopes; box+box was
        // already taken above, keeping the Box type for axis sums
        if matches!(a, Body::Zonotope { .. }) || matches!(b, Body::Zonotope { .. }) {
            let mut generators = ga;
            generators.extend(gb);
            return Some(Body::Zonotope {
                center: ca.iter().zip(&cb).map(|(x, y)| x + y).collect(),
                generators,
            });
        }
    }
    None
}

fn fuse_pair_vertices(a: &Body, b: &Body) -> Option<Body> {
    let va = a.vertex_list()?;
    let vb = b.vertex_list()?;
    if va.len() * vb.len() > 4096 {
        return None;
    }
    let mut vertices = Vec::with_capacity(va.len() * vb.len());
    for p in &va {
        for q in &vb {
            vertices.push(p.iter().zip(q).map(|(x, y)| x + y).collect());
        }
    }
    Some(Body::VPolytope { vertices })
}

// E(c1, S) + E(c2, t^2 S) = E(c1 + c2, (1 + t)^2 S): the summands are
// homothetic, so the sum is the same ellipsoid scaled by the radius sum.
fn proportional_ellipsoid_sum(a: &Body, b: &Body) -> Option<Body> {
    let (ca, sa) = a.as_ellipsoid()?;
    let (cb, sb) = b.as_ellipsoid()?;
    let n = ca.len();
    // detect sb = t^2 sa
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            num += sb[(i, j)] * sa[(i, j)];
            den += sa[(i, j)] * sa[(i, j)];
        }
    }
    if den <= 0.0 {
        return None;
    }
    let t2 = num / den;
    if t2 <= 0.0 {
        return None;
    }
    let scale = sa.max_abs();
    for i in 0..n {
        for j in 0..n {
            if (sb[(i, j)] - t2 * sa[(i, j)]).abs() > 1e-9 * scale.max(1.0) * t2.max(1.0) {
                return None;
            }
        }
    }
    let factor = (1.0 + t2.sqrt()).powi(2);
    Some(Body::Ellipsoid {
        center: ca.iter().zip(&cb).map(|(x, y)| x + y).collect(),
        shape: sa.scale(factor),
    })
}

// A Minkowski sum of exactly one axis box and one ball is a rounded box:
// membership and volume are closed-form.
fn as_box_ball_sum(parts: &[Body]) -> Option<(&Body, Vec<f64>, f64)> {
    if parts.len() != 2 {
        return None;
    }
    for (i, j) in [(0usize, 1usize), (1, 0)] {
        if let (bx @ Body::Box { .. }, Body::Ball { center, radius }) = (&parts[i], &parts[j]) {
            return Some((bx, center.clone(), *radius));
        }
    }
    None
}

// Euclidean distance from x to an axis box.
fn box_distance(lo: &[f64], hi: &[f64], x: &[f64]) -> f64 {
    let mut d2 = 0.0;
    for i in 0..x.len() {
        let d = if x[i] < lo[i] {
            lo[i] - x[i]
        } else if x[i] > hi[i] {
            x[i] - hi[i]
        } else {
            0.0
        };
        d2 += d * d;
    }
    d2.sqrt()
}

// Steiner decomposition of |Box + r B^n|: one term per subset S of axes,
// the box face spanned by S times the (n-|S|)-ball volume.
fn box_ball_volume(lo: &[f64], hi: &[f64], radius: f64) -> f64 {
    let n = lo.len();
    let mut total = 0.0;
    for mask in 0..1usize << n {
        let mut face = 1.0;
        let mut codim = 0;
        for i in 0..n {
            if mask >> i & 1 == 1 {
                face *= hi[i] - lo[i];
            } else {
                codim += 1;
            }
        }
        let ball = if codim == 0 { 1.0 } else { ball_volume(codim, radius) };
        total += face * ball;
    }
    total
}

/// Uniform point in the unit ball: normalized Gaussian direction with
/// radius U^{1/n}.
fn ball_point(n: usize, stream: &mut SeededStream) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..n).map(|_| stream.gaussian()).collect();
        let len = norm(&g);
        if len > 1e-12 {
            let r = stream.uniform().powf(1.0 / n as f64);
            return g.iter().map(|x| r * x / len).collect();
        }
    }
}

/// Exponential spacings: k iid Exp(1) normalized to sum 1, uniform on the
/// probability simplex.
fn exp_spacings(k: usize, stream: &mut SeededStream) -> Vec<f64> {
    let mut e: Vec<f64> = (0..k).map(|_| -stream.uniform().max(1e-300).ln()).collect();
    let s: f64 = e.iter().sum();
    for v in &mut e {
        *v /= s;
    }
    e
}

// Heuristic-mixing hit-and-run sampler: burn-in 1000, thinning 50 n. No
// certified mixing time at this budget; the flag is the constant name.
struct HitAndRun {
    x: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    thin: usize,
}

impl HitAndRun {
    fn start(body: &Body, stream: &mut SeededStream) -> Result<HitAndRun> {
        let x = body.interior_point();
        if !body.contains(&x)? {
            return Err(Error::SamplingFailed);
        }
        let (lo, hi) = body.bounding_box();
        let mut walk = HitAndRun { x, lo, hi, thin: body.dim() * 50 };
        for _ in 0..HIT_AND_RUN_BURN_IN {
            walk.step(body, stream)?;
        }
        Ok(walk)
    }

    fn next_sample_on(&mut self, body: &Body, stream: &mut SeededStream) -> Result<Vec<f64>> {
        for _ in 0..self.thin {
            self.step(body, stream)?;
        }
        Ok(self.x.clone())
    }

    fn step(&mut self, body: &Body, stream: &mut SeededStream) -> Result<()> {
        let n = self.x.len();
        let mut d: Vec<f64> = (0..n).map(|_| stream.gaussian()).collect();
        let len = norm(&d);
        if len < 1e-12 {
            return Ok(());
        }
        for v in &mut d {
            *v /= len;
        }
        // chord bounds from the bounding box
        let mut t_min = f64::NEG_INFINITY;
        let mut t_max = f64::INFINITY;
        for i in 0..n {
            if d[i].abs() > 1e-300 {
                let a = (self.lo[i] - self.x[i]) / d[i];
                let b = (self.hi[i] - self.x[i]) / d[i];
                t_min = t_min.max(a.min(b));
                t_max = t_max.min(a.max(b));
            }
        }
        let hi = bisect_boundary(body, &self.x, &d, t_max.max(0.0))?;
        let lo = -bisect_boundary(body, &self.x, &neg(&d), (-t_min).max(0.0))?;
        let t = lo + (hi - lo) * stream.uniform();
        for i in 0..n {
            self.x[i] += t * d[i];
        }
        Ok(())
    }
}

fn neg(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| -x).collect()
}

// Largest t in [0, t_cap] with x + t d still in the body (x itself inside).
fn bisect_boundary(body: &Body, x: &[f64], d: &[f64], t_cap: f64) -> Result<f64> {
    let probe = |t: f64| -> Result<bool> {
        let p: Vec<f64> = x.iter().zip(d).map(|(xi, di)| xi + t * di).collect();
        body.contains(&p)
    };
    if t_cap <= 0.0 || probe(t_cap)? {
        return Ok(t_cap.max(0.0));
    }
    let (mut lo, mut hi) = (0.0, t_cap);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
