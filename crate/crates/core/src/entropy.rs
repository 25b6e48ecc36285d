//! Differential entropy: closed forms, plug-in Monte Carlo, the smoothed
//! estimator for entropies of sums, a nearest-neighbor cross-check, and the
//! Renyi-2 functional. Entropies are in nats.

use crate::bodies::{mc_slots, Estimate};
use crate::measures::Density;
use crate::rng::SeededStream;
use crate::special::{ball_volume, digamma_int};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyMethod {
    Analytic,
    PluginMc,
    SmoothedSum,
    Knn,
}

/// An entropy value in nats with its estimation pedigree.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EntropyValue {
    pub h: f64,
    pub dim: usize,
    pub method: EntropyMethod,
    pub stderr: f64,
    /// Set by the smoothed estimator when halving the inner sample count
    /// moves the estimate by more than one standard error.
    pub bias_flag: bool,
}

impl EntropyValue {
    pub fn analytic(h: f64, dim: usize) -> Self {
        EntropyValue { h, dim, method: EntropyMethod::Analytic, stderr: 0.0, bias_flag: false }
    }

    /// Entropy power `exp(2 h / n)`.
    pub fn power(&self) -> f64 {
        entropy_power(self.h, self.dim)
    }

    /// Standard error of the entropy power, by the delta method.
    pub fn power_stderr(&self) -> f64 {
        self.power() * 2.0 * self.stderr / self.dim as f64
    }
}

pub fn entropy_power(h: f64, dim: usize) -> f64 {
    (2.0 * h / dim as f64).exp()
}

/// Closed-form entropy for the families that have one: uniform laws with an
/// exact volume, Gaussians, the exponential orthant, the one-dimensional
/// Pareto law, and affine pushforwards of these (`h(uX + b) = h(X) + ln|det u|`).
pub fn entropy_analytic(density: &Density) -> Result<EntropyValue> {
    let n = density.dim();
    let h = match density {
        Density::UniformOnBody { body } => body.volume_exact()?.ln(),
        Density::Gaussian { cov, .. } => {
            let det = cov.det();
            if det <= 0.0 {
                return Err(Error::NotSpd);
            }
            0.5 * (n as f64 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln() + det.ln())
        }
        Density::ExponentialOrthant { rate, .. } => n as f64 * (1.0 - rate.ln()),
        Density::ParetoOrthant { dim: 1, beta } => beta / (beta - 1.0) - (beta - 1.0).ln(),
        Density::LinearPushforward { map, density, .. } => {
            let det = map.det().abs();
            if det <= 0.0 {
                return Err(Error::Singular);
            }
            entropy_analytic(density)?.h + det.ln()
        }
        _ => return Err(Error::NoClosedForm),
    };
    Ok(EntropyValue::analytic(h, n))
}

#[derive(Default, Clone, Copy)]
struct Moments {
    sum: f64,
    sumsq: f64,
    count: usize,
}

impl std::iter::Sum for Moments {
    fn sum<I: Iterator<Item = Moments>>(iter: I) -> Moments {
        iter.fold(Moments::default(), |a, b| Moments {
            sum: a.sum + b.sum,
            sumsq: a.sumsq + b.sumsq,
            count: a.count + b.count,
        })
    }
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.sum += v;
        self.sumsq += v * v;
        self.count += 1;
    }

    fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    fn stderr(&self) -> f64 {
        let m = self.count as f64;
        let var = (self.sumsq / m - (self.sum / m).powi(2)).max(0.0);
        (var / m).sqrt()
    }
}

/// Plug-in estimate `-(1/N) sum log f(X_i)` for an evaluable family.
pub fn entropy_plugin_mc(
    density: &Density,
    samples: usize,
    stream: &SeededStream,
) -> Result<EntropyValue> {
    let pdf = density.pdf()?;
    let sampler = density.sampler()?;
    let stats: Moments = mc_slots(samples, stream, "plugin", |count, sub| {
        let mut acc = Moments::default();
        for _ in 0..count {
            if let Ok(x) = sampler.draw(sub) {
                acc.push(-pdf.log_density(&x));
            }
        }
        acc
    });
    Ok(EntropyValue {
        h: stats.mean(),
        dim: density.dim(),
        method: EntropyMethod::PluginMc,
        stderr: stats.stderr(),
        bias_flag: false,
    })
}

#[derive(Default, Clone, Copy)]
struct SmoothedAcc {
    full: Moments,
    half_sum: f64,
}

impl std::iter::Sum for SmoothedAcc {
    fn sum<I: Iterator<Item = SmoothedAcc>>(iter: I) -> SmoothedAcc {
        iter.fold(SmoothedAcc::default(), |a, b| SmoothedAcc {
            full: [a.full, b.full].into_iter().sum(),
            half_sum: a.half_sum + b.half_sum,
        })
    }
}

/// Smoothed plug-in estimate of `h(X + Y)`:
/// `-(1/N) sum_i log[(1/M) sum_j f_X(S_i - Y_j)]` with `S_i = X_i + Y'_i`
/// and fresh inner samples per outer point.
///
/// The inner average is an unbiased density estimate of `f_{X+Y}` at `S_i`,
/// so the outer bias is O(1/M); halving M gives the bias diagnostic that
/// sets `bias_flag`. An inner average with no support hits at all is
/// replaced by `max_density(X) / (2M)` so the handful of boundary points a
/// compactly supported instance produces cannot inject `-log 0`; positive
/// averages are used as-is, however small (heavy-tailed laws live there).
pub fn entropy_sum_smoothed(
    x: &Density,
    y: &Density,
    outer_n: usize,
    inner_m: usize,
    stream: &SeededStream,
) -> Result<EntropyValue> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(x.dim(), y.dim()));
    }
    if inner_m < 2 || outer_n == 0 {
        return Err(Error::Precondition("need outer_n >= 1 and inner_m >= 2".into()));
    }
    let n = x.dim();
    let pdf_x = x.pdf()?;
    let sampler_x = x.sampler()?;
    let sampler_y = y.sampler()?;
    let floor_log = x.max_density()?.ln() - (2.0 * inner_m as f64).ln();
    let half_m = inner_m / 2;

    let acc: SmoothedAcc = mc_slots(outer_n, stream, "smoothed", |count, sub| {
        let mut acc = SmoothedAcc::default();
        let mut logs = vec![0.0f64; inner_m];
        let mut point = vec![0.0f64; n];
        for _ in 0..count {
            let xi = match sampler_x.draw(sub) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let yi = match sampler_y.draw(sub) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let s: Vec<f64> = xi.iter().zip(&yi).map(|(a, b)| a + b).collect();
            for slot in logs.iter_mut() {
                let yj = match sampler_y.draw(sub) {
                    Ok(v) => v,
                    Err(_) => {
                        *slot = f64::NEG_INFINITY;
                        continue;
                    }
                };
                for i in 0..n {
                    point[i] = s[i] - yj[i];
                }
                *slot = pdf_x.log_density(&point);
            }
            let mut full = log_mean_exp(&logs);
            if !full.is_finite() {
                full = floor_log;
            }
            let mut half = log_mean_exp(&logs[..half_m]);
            if !half.is_finite() {
                half = floor_log;
            }
            acc.full.push(-full);
            acc.half_sum += -half;
        }
        acc
    });

    let h = acc.full.mean();
    let stderr = acc.full.stderr();
    let h_half = acc.half_sum / acc.full.count as f64;
    Ok(EntropyValue {
        h,
        dim: n,
        method: EntropyMethod::SmoothedSum,
        stderr,
        bias_flag: (h_half - h).abs() > stderr,
    })
}

fn log_mean_exp(logs: &[f64]) -> f64 {
    let max = logs.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = logs.iter().map(|l| (l - max).exp()).sum();
    max + (sum / logs.len() as f64).ln()
}

/// Kozachenko-Leonenko estimate from k-th nearest-neighbor distances:
/// `h = psi(N) - psi(k) + ln V_n + (n/N) sum ln eps_i`.
///
/// Duplicate points are handled by flooring distances at 1e-12. A
/// cross-check estimator only: it carries boundary bias on compactly
/// supported laws and is never the primary number in a check.
pub fn entropy_knn(samples: &[Vec<f64>], k: usize) -> Result<EntropyValue> {
    let count = samples.len();
    if k < 1 || count <= k {
        return Err(Error::Precondition("need more samples than neighbors".into()));
    }
    let n = samples[0].len();
    if samples.iter().any(|s| s.len() != n) {
        return Err(Error::DimensionMismatch(n, 0));
    }
    let tree = KdTree::build(samples);
    let mut stats = Moments::default();
    for (i, p) in samples.iter().enumerate() {
        let dist = tree.kth_neighbor_dist(p, i, k).max(1e-12);
        stats.push(n as f64 * dist.ln());
    }
    let h = digamma_int(count) - digamma_int(k) + ball_volume(n, 1.0).ln() + stats.mean();
    Ok(EntropyValue {
        h,
        dim: n,
        method: EntropyMethod::Knn,
        // spacing-variance approximation; ignores the shared-tree correlation
        stderr: stats.stderr(),
        bias_flag: false,
    })
}

/// Monte Carlo Renyi-2 functional `int f^2 = E_f[f(X)]`.
pub fn renyi2_mc(density: &Density, samples: usize, stream: &SeededStream) -> Result<Estimate> {
    let pdf = density.pdf()?;
    let sampler = density.sampler()?;
    let stats: Moments = mc_slots(samples, stream, "renyi2", |count, sub| {
        let mut acc = Moments::default();
        for _ in 0..count {
            if let Ok(x) = sampler.draw(sub) {
                acc.push(pdf.density(&x));
            }
        }
        acc
    });
    Ok(Estimate { value: stats.mean(), stderr: stats.stderr(), samples: stats.count })
}

// ---------------------------------------------------------------------------
// kd-tree for the nearest-neighbor estimator

struct KdNode {
    point: usize,
    axis: usize,
    left: Option<usize>,
    right: Option<usize>,
}

struct KdTree<'a> {
    pts: &'a [Vec<f64>],
    nodes: Vec<KdNode>,
    root: Option<usize>,
}

impl<'a> KdTree<'a> {
    fn build(pts: &'a [Vec<f64>]) -> Self {
        let mut idx: Vec<usize> = (0..pts.len()).collect();
        let mut tree = KdTree { pts, nodes: Vec::with_capacity(pts.len()), root: None };
        let n = pts[0].len();
        tree.root = tree.build_rec(&mut idx, 0, n);
        tree
    }

    fn build_rec(&mut self, idx: &mut [usize], depth: usize, dim: usize) -> Option<usize> {
        if idx.is_empty() {
            return None;
        }
        let axis = depth % dim;
        let mid = idx.len() / 2;
        idx.select_nth_unstable_by(mid, |&a, &b| {
            self.pts[a][axis].total_cmp(&self.pts[b][axis])
        });
        let point = idx[mid];
        let node_id = self.nodes.len();
        self.nodes.push(KdNode { point, axis, left: None, right: None });
        let (lo, rest) = idx.split_at_mut(mid);
        let hi = &mut rest[1..];
        let left = self.build_rec(lo, depth + 1, dim);
        let right = self.build_rec(hi, depth + 1, dim);
        self.nodes[node_id].left = left;
        self.nodes[node_id].right = right;
        Some(node_id)
    }

    /// Distance to the k-th nearest neighbor of `query`, excluding the
    /// sample at `skip`.
    fn kth_neighbor_dist(&self, query: &[f64], skip: usize, k: usize) -> f64 {
        // max-heap of the k best squared distances
        let mut best: std::collections::BinaryHeap<HeapDist> = Default::default();
        self.search(self.root, query, skip, k, &mut best);
        best.peek().map(|o| o.0.sqrt()).unwrap_or(0.0)
    }

    fn search(
        &self,
        node: Option<usize>,
        query: &[f64],
        skip: usize,
        k: usize,
        best: &mut std::collections::BinaryHeap<HeapDist>,
    ) {
        let Some(id) = node else { return };
        let n = &self.nodes[id];
        if n.point != skip {
            let d2: f64 = self.pts[n.point]
                .iter()
                .zip(query)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if best.len() < k {
                best.push(HeapDist(d2));
            } else if d2 < best.peek().unwrap().0 {
                best.pop();
                best.push(HeapDist(d2));
            }
        }
        let axis = n.axis;
        let delta = query[axis] - self.pts[n.point][axis];
        let (near, far) = if delta < 0.0 { (n.left, n.right) } else { (n.right, n.left) };
        self.search(near, query, skip, k, best);
        if best.len() < k || delta * delta < best.peek().unwrap().0 {
            self.search(far, query, skip, k, best);
        }
    }
}

// f64 squared distance with a total order for the heap
#[derive(PartialEq)]
struct HeapDist(f64);

impl Eq for HeapDist {}

impl PartialOrd for HeapDist {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapDist {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}
