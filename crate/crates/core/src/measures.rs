//! Probability density families with a convexity-parameter algebra.
//!
//! Every family carries its triple (kappa, kappa-tilde, beta): a measure is
//! kappa-concave iff its density is kappa-tilde-concave, with
//! `kt = kappa / (1 - n kappa)` and `beta = 1 / |kt|`. Log-concave is the
//! kappa = 0 limit; uniform laws on convex bodies sit at kappa = 1/n; the
//! Pareto-type families have kappa = -1/(beta - n) < 0.

use crate::bodies::Body;
use crate::linalg::SquareMatrix;
use crate::rng::SeededStream;
use crate::{Error, Result};
use rand_distr::{Distribution, Exp1, Gamma};
use serde::{Deserialize, Serialize};

/// The convexity triple of a measure on R^n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityParams {
    pub dim: usize,
    pub kappa: f64,
    /// `kappa / (1 - n kappa)`; +inf when kappa = 1/n.
    pub kappa_tilde: f64,
    /// `1 / |kappa_tilde|`: +inf for log-concave, `n - 1/kappa` for kappa < 0,
    /// and 0 in the uniform limit kappa = 1/n (where kappa_tilde = +inf).
    pub beta: f64,
}

impl ConvexityParams {
    pub fn from_kappa(kappa: f64, dim: usize) -> Self {
        let n = dim as f64;
        assert!(kappa <= 1.0 / n + 1e-12, "kappa must be at most 1/n");
        if kappa == 0.0 {
            return ConvexityParams { dim, kappa: 0.0, kappa_tilde: 0.0, beta: f64::INFINITY };
        }
        if (kappa - 1.0 / n).abs() < 1e-14 {
            return ConvexityParams {
                dim,
                kappa: 1.0 / n,
                kappa_tilde: f64::INFINITY,
                beta: 0.0,
            };
        }
        let kt = kappa / (1.0 - n * kappa);
        ConvexityParams { dim, kappa, kappa_tilde: kt, beta: 1.0 / kt.abs() }
    }

    pub fn log_concave(dim: usize) -> Self {
        Self::from_kappa(0.0, dim)
    }

    pub fn is_log_concave(&self) -> bool {
        self.kappa >= 0.0
    }
}

/// Convexity parameter of a convolution: `1/kappa = 1/kappa' + 1/kappa''`,
/// requiring `kappa' + kappa'' > 0` with both in [-1, 1], or both zero
/// (the log-concave limit).
pub fn convolution_kappa(a: &ConvexityParams, b: &ConvexityParams) -> Result<ConvexityParams> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    let (k1, k2) = (a.kappa, b.kappa);
    if k1 == 0.0 && k2 == 0.0 {
        return Ok(ConvexityParams::log_concave(a.dim));
    }
    if !(-1.0..=1.0).contains(&k1) || !(-1.0..=1.0).contains(&k2) {
        return Err(Error::Precondition("convolution rule needs kappa in [-1, 1]".into()));
    }
    if k1 + k2 <= 0.0 {
        return Err(Error::Precondition(format!(
            "convolution rule needs kappa' + kappa'' > 0, got {k1} + {k2}"
        )));
    }
    if k1 == 0.0 || k2 == 0.0 {
        // harmonic sum with an infinite reciprocal term
        return Ok(ConvexityParams::log_concave(a.dim));
    }
    Ok(ConvexityParams::from_kappa(1.0 / (1.0 / k1 + 1.0 / k2), a.dim))
}

/// The power mean `M_kappa^{(t)}(a, b) = (t a^k + (1-t) b^k)^{1/k}` with the
/// usual conventions at k = 0 (geometric), +inf (max), -inf (min).
pub fn m_kappa_mean(a: f64, b: f64, t: f64, kappa: f64) -> f64 {
    assert!((0.0..=1.0).contains(&t));
    if kappa == 0.0 {
        return a.powf(t) * b.powf(1.0 - t);
    }
    if kappa == f64::INFINITY {
        return a.max(b);
    }
    if kappa == f64::NEG_INFINITY {
        return a.min(b);
    }
    if (a <= 0.0 || b <= 0.0) && kappa < 0.0 {
        // a zero endpoint collapses a negative-power mean
        return 0.0;
    }
    (t * a.max(0.0).powf(kappa) + (1.0 - t) * b.max(0.0).powf(kappa)).powf(1.0 / kappa)
}

/// A probability density on R^n from one of the named families.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Density {
    UniformOnBody { body: Body },
    Gaussian { mean: Vec<f64>, cov: SquareMatrix },
    /// `f(x) = rate^n exp(-rate sum x_i)` on the positive orthant.
    ExponentialOrthant { dim: usize, rate: f64 },
    /// `f(x) = (beta-1)...(beta-n) (1 + sum x_i)^{-beta}` on the positive
    /// orthant; requires `beta > n`.
    ParetoOrthant { dim: usize, beta: f64 },
    /// `f(x)` proportional to `(sum x_i)^{1/kt}` on the open standard simplex.
    PowerSimplex { dim: usize, kappa_tilde: f64 },
    /// Law of `map X + offset`. An empty offset means zero.
    LinearPushforward {
        map: SquareMatrix,
        #[serde(default)]
        offset: Vec<f64>,
        density: Box<Density>,
    },
    /// Law of `X - X'` for X, X' iid from the child.
    SymmetrizedPair { density: Box<Density> },
    /// Law of `X + Y` for independent X, Y.
    SumPair { first: Box<Density>, second: Box<Density> },
}

impl Density {
    pub fn uniform(body: Body) -> Density {
        Density::UniformOnBody { body }
    }

    pub fn gaussian(mean: Vec<f64>, cov: SquareMatrix) -> Result<Density> {
        if mean.len() != cov.order() {
            return Err(Error::DimensionMismatch(mean.len(), cov.order()));
        }
        cov.sym_sqrt()?; // SPD check
        Ok(Density::Gaussian { mean, cov })
    }

    pub fn standard_gaussian(dim: usize) -> Density {
        Density::Gaussian { mean: vec![0.0; dim], cov: SquareMatrix::identity(dim) }
    }

    pub fn exponential_orthant(dim: usize, rate: f64) -> Result<Density> {
        if !(rate > 0.0) {
            return Err(Error::Precondition("exponential rate must be positive".into()));
        }
        Ok(Density::ExponentialOrthant { dim, rate })
    }

    /// Degenerate guard: all stated normalizations need `beta > n`, with a
    /// small positive margin.
    pub fn pareto_orthant(dim: usize, beta: f64) -> Result<Density> {
        if !(beta > dim as f64 + 1e-6) {
            return Err(Error::Precondition(format!(
                "ParetoOrthant needs beta > n + 1e-6, got beta = {beta}, n = {dim}"
            )));
        }
        Ok(Density::ParetoOrthant { dim, beta })
    }

    pub fn power_simplex(dim: usize, kappa_tilde: f64) -> Result<Density> {
        if !(kappa_tilde > 0.0) || !kappa_tilde.is_finite() {
            return Err(Error::Precondition(
                "PowerSimplex needs a finite positive kappa_tilde".into(),
            ));
        }
        Ok(Density::PowerSimplex { dim, kappa_tilde })
    }

    pub fn pushforward(map: SquareMatrix, density: Density) -> Result<Density> {
        Self::pushforward_affine(map, Vec::new(), density)
    }

    pub fn pushforward_affine(
        map: SquareMatrix,
        offset: Vec<f64>,
        density: Density,
    ) -> Result<Density> {
        if map.order() != density.dim() {
            return Err(Error::DimensionMismatch(map.order(), density.dim()));
        }
        if !offset.is_empty() && offset.len() != density.dim() {
            return Err(Error::DimensionMismatch(offset.len(), density.dim()));
        }
        Ok(Density::LinearPushforward { map, offset, density: Box::new(density) })
    }

    /// The law of `X - X'` with `X'` an independent copy.
    pub fn symmetrize(&self) -> Density {
        Density::SymmetrizedPair { density: Box::new(self.clone()) }
    }

    pub fn sum_pair(first: Density, second: Density) -> Result<Density> {
        if first.dim() != second.dim() {
            return Err(Error::DimensionMismatch(first.dim(), second.dim()));
        }
        Ok(Density::SumPair { first: Box::new(first), second: Box::new(second) })
    }

    pub fn dim(&self) -> usize {
        match self {
            Density::UniformOnBody { body } => body.dim(),
            Density::Gaussian { mean, .. } => mean.len(),
            Density::ExponentialOrthant { dim, .. }
            | Density::ParetoOrthant { dim, .. }
            | Density::PowerSimplex { dim, .. } => *dim,
            Density::LinearPushforward { density, .. } => density.dim(),
            Density::SymmetrizedPair { density } => density.dim(),
            Density::SumPair { first, .. } => first.dim(),
        }
    }

    /// The convexity triple of this law.
    ///
    /// Sums and symmetrizations go through the convolution rule and inherit
    /// its precondition (`kappa' + kappa'' > 0` unless both are zero).
    pub fn params(&self) -> Result<ConvexityParams> {
        let n = self.dim();
        match self {
            Density::UniformOnBody { .. } => Ok(ConvexityParams::from_kappa(1.0 / n as f64, n)),
            Density::Gaussian { .. } | Density::ExponentialOrthant { .. } => {
                Ok(ConvexityParams::log_concave(n))
            }
            Density::ParetoOrthant { beta, .. } => {
                Ok(ConvexityParams::from_kappa(-1.0 / (beta - n as f64), n))
            }
            Density::PowerSimplex { kappa_tilde, .. } => {
                let kappa = kappa_tilde / (1.0 + n as f64 * kappa_tilde);
                Ok(ConvexityParams::from_kappa(kappa, n))
            }
            Density::LinearPushforward { density, .. } => density.params(),
            Density::SymmetrizedPair { density } => {
                let k = density.params()?;
                convolution_kappa(&k, &k)
            }
            Density::SumPair { first, second } => {
                convolution_kappa(&first.params()?, &second.params()?)
            }
        }
    }

    /// Compiled evaluator with the normalization constants precomputed.
    /// Fails with [`Error::NotEvaluable`] for sum and symmetrized pairs,
    /// whose densities have no closed form; entropy of such laws goes
    /// through the smoothed estimator instead.
    pub fn pdf(&self) -> Result<Pdf> {
        let kind = match self {
            Density::UniformOnBody { body } => {
                let vol = body.volume_exact()?;
                if !(vol > 0.0) {
                    return Err(Error::BadBody("uniform law needs positive volume"));
                }
                PdfKind::Uniform { body: body.clone(), log_density: -vol.ln() }
            }
            Density::Gaussian { mean, cov } => {
                let det = cov.det();
                if det <= 0.0 {
                    return Err(Error::NotSpd);
                }
                PdfKind::Gaussian {
                    mean: mean.clone(),
                    precision: cov.inverse()?,
                    log_norm: -0.5
                        * (mean.len() as f64 * (2.0 * std::f64::consts::PI).ln() + det.ln()),
                }
            }
            Density::ExponentialOrthant { dim, rate } => {
                PdfKind::Exponential { dim: *dim, rate: *rate, log_norm: *dim as f64 * rate.ln() }
            }
            Density::ParetoOrthant { dim, beta } => PdfKind::Pareto {
                dim: *dim,
                beta: *beta,
                log_norm: pareto_log_norm(*dim, *beta),
            },
            Density::PowerSimplex { dim, kappa_tilde } => {
                let p = 1.0 / kappa_tilde;
                PdfKind::PowerSimplex {
                    dim: *dim,
                    power: p,
                    log_norm: power_simplex_log_norm(*dim, p),
                }
            }
            Density::LinearPushforward { map, offset, density } => {
                let det = map.det().abs();
                if det <= 0.0 {
                    return Err(Error::Singular);
                }
                PdfKind::Affine {
                    inverse: map.inverse()?,
                    offset: fixed_offset(offset, density.dim()),
                    log_det: det.ln(),
                    inner: Box::new(density.pdf()?),
                }
            }
            Density::SymmetrizedPair { .. } | Density::SumPair { .. } => {
                return Err(Error::NotEvaluable)
            }
        };
        Ok(Pdf { kind })
    }

    /// Normalized density value at `x`; zero outside the support.
    pub fn density_eval(&self, x: &[f64]) -> Result<f64> {
        Ok(self.pdf()?.density(x))
    }

    /// Essential supremum of the density.
    pub fn max_density(&self) -> Result<f64> {
        match self {
            Density::UniformOnBody { body } => Ok(1.0 / body.volume_exact()?),
            Density::Gaussian { mean, cov } => {
                let det = cov.det();
                if det <= 0.0 {
                    return Err(Error::NotSpd);
                }
                Ok(((2.0 * std::f64::consts::PI).powi(mean.len() as i32) * det)
                    .sqrt()
                    .recip())
            }
            Density::ExponentialOrthant { dim, rate } => Ok(rate.powi(*dim as i32)),
            Density::ParetoOrthant { dim, beta } => Ok(pareto_log_norm(*dim, *beta).exp()),
            // supremum approached at the face sum x = 1
            Density::PowerSimplex { dim, kappa_tilde } => {
                Ok(power_simplex_log_norm(*dim, 1.0 / kappa_tilde).exp())
            }
            Density::LinearPushforward { map, density, .. } => {
                let det = map.det().abs();
                if det <= 0.0 {
                    return Err(Error::Singular);
                }
                Ok(density.max_density()? / det)
            }
            Density::SymmetrizedPair { .. } | Density::SumPair { .. } => Err(Error::NotEvaluable),
        }
    }

    /// Compiled sampler (all families are sampleable).
    pub fn sampler(&self) -> Result<Sampler> {
        let kind = match self {
            Density::UniformOnBody { body } => SamplerKind::Uniform { body: body.clone() },
            Density::Gaussian { mean, cov } => {
                SamplerKind::Gaussian { mean: mean.clone(), half: cov.sym_sqrt()? }
            }
            Density::ExponentialOrthant { dim, rate } => {
                SamplerKind::Exponential { dim: *dim, rate: *rate }
            }
            Density::ParetoOrthant { dim, beta } => SamplerKind::Pareto {
                dim: *dim,
                gamma: Gamma::new(beta - *dim as f64, 1.0)
                    .map_err(|e| Error::Precondition(e.to_string()))?,
            },
            Density::PowerSimplex { dim, kappa_tilde } => {
                SamplerKind::PowerSimplex { dim: *dim, power: 1.0 / kappa_tilde }
            }
            Density::LinearPushforward { map, offset, density } => SamplerKind::Affine {
                map: map.clone(),
                offset: fixed_offset(offset, density.dim()),
                inner: Box::new(density.sampler()?),
            },
            Density::SymmetrizedPair { density } => {
                SamplerKind::Difference { inner: Box::new(density.sampler()?) }
            }
            Density::SumPair { first, second } => SamplerKind::Sum {
                first: Box::new(first.sampler()?),
                second: Box::new(second.sampler()?),
            },
        };
        Ok(Sampler { kind })
    }

    /// One sample. Bulk callers should compile a [`Sampler`] once.
    pub fn sample(&self, stream: &mut SeededStream) -> Result<Vec<f64>> {
        self.sampler()?.draw(stream)
    }
}

fn fixed_offset(offset: &[f64], dim: usize) -> Vec<f64> {
    if offset.is_empty() {
        vec![0.0; dim]
    } else {
        offset.to_vec()
    }
}

/// `ln[(beta-1)(beta-2)...(beta-n)]`.
fn pareto_log_norm(dim: usize, beta: f64) -> f64 {
    (1..=dim).map(|k| (beta - k as f64).ln()).sum()
}

/// `ln[(n-1)! (p+n)]`, from `int_simplex (sum x)^p dx = 1/((n-1)!(p+n))`.
fn power_simplex_log_norm(dim: usize, p: f64) -> f64 {
    let mut log_fact = 0.0;
    for k in 2..dim {
        log_fact += (k as f64).ln();
    }
    log_fact + (p + dim as f64).ln()
}

/// Compiled density evaluator.
#[derive(Debug, Clone)]
pub struct Pdf {
    kind: PdfKind,
}

#[derive(Debug, Clone)]
enum PdfKind {
    Uniform { body: Body, log_density: f64 },
    Gaussian { mean: Vec<f64>, precision: SquareMatrix, log_norm: f64 },
    Exponential { dim: usize, rate: f64, log_norm: f64 },
    Pareto { dim: usize, beta: f64, log_norm: f64 },
    PowerSimplex { dim: usize, power: f64, log_norm: f64 },
    Affine { inverse: SquareMatrix, offset: Vec<f64>, log_det: f64, inner: Box<Pdf> },
}

impl Pdf {
    /// ln f(x); -inf outside the support.
    pub fn log_density(&self, x: &[f64]) -> f64 {
        match &self.kind {
            PdfKind::Uniform { body, log_density } => {
                if body.contains(x).unwrap_or(false) {
                    *log_density
                } else {
                    f64::NEG_INFINITY
                }
            }
            PdfKind::Gaussian { mean, precision, log_norm } => {
                let d: Vec<f64> = x.iter().zip(mean).map(|(a, b)| a - b).collect();
                let q = crate::linalg::dot(&d, &precision.matvec(&d));
                log_norm - 0.5 * q
            }
            PdfKind::Exponential { dim, rate, log_norm } => {
                if x.len() != *dim || x.iter().any(|&v| v < 0.0) {
                    return f64::NEG_INFINITY;
                }
                log_norm - rate * x.iter().sum::<f64>()
            }
            PdfKind::Pareto { dim, beta, log_norm } => {
                if x.len() != *dim || x.iter().any(|&v| v < 0.0) {
                    return f64::NEG_INFINITY;
                }
                log_norm - beta * x.iter().sum::<f64>().ln_1p()
            }
            PdfKind::PowerSimplex { dim, power, log_norm } => {
                if x.len() != *dim || x.iter().any(|&v| v <= 0.0) {
                    return f64::NEG_INFINITY;
                }
                let s: f64 = x.iter().sum();
                if s >= 1.0 {
                    return f64::NEG_INFINITY;
                }
                log_norm + power * s.ln()
            }
            PdfKind::Affine { inverse, offset, log_det, inner } => {
                let shifted: Vec<f64> = x.iter().zip(offset).map(|(a, b)| a - b).collect();
                inner.log_density(&inverse.matvec(&shifted)) - log_det
            }
        }
    }

    pub fn density(&self, x: &[f64]) -> f64 {
        let l = self.log_density(x);
        if l == f64::NEG_INFINITY {
            0.0
        } else {
            l.exp()
        }
    }
}

/// Compiled sampler.
#[derive(Debug, Clone)]
pub struct Sampler {
    kind: SamplerKind,
}

#[derive(Debug, Clone)]
enum SamplerKind {
    Uniform { body: Body },
    Gaussian { mean: Vec<f64>, half: SquareMatrix },
    Exponential { dim: usize, rate: f64 },
    Pareto { dim: usize, gamma: Gamma<f64> },
    PowerSimplex { dim: usize, power: f64 },
    Affine { map: SquareMatrix, offset: Vec<f64>, inner: Box<Sampler> },
    Difference { inner: Box<Sampler> },
    Sum { first: Box<Sampler>, second: Box<Sampler> },
}

impl Sampler {
    pub fn draw(&self, stream: &mut SeededStream) -> Result<Vec<f64>> {
        match &self.kind {
            SamplerKind::Uniform { body } => body.sample_uniform(stream),
            SamplerKind::Gaussian { mean, half } => {
                let z: Vec<f64> = (0..mean.len()).map(|_| stream.gaussian()).collect();
                let y = half.matvec(&z);
                Ok(y.iter().zip(mean).map(|(a, b)| a + b).collect())
            }
            SamplerKind::Exponential { dim, rate } => Ok((0..*dim)
                .map(|_| {
                    let e: f64 = Exp1.sample(stream);
                    e / rate
                })
                .collect()),
            // X_i = E_i / G with G ~ Gamma(beta - n): the Gamma mixture of
            // iid exponentials reproduces (1 + sum x)^{-beta} exactly.
            SamplerKind::Pareto { dim, gamma } => {
                let g: f64 = gamma.sample(stream);
                let g = g.max(1e-300);
                Ok((0..*dim)
                    .map(|_| {
                        let e: f64 = Exp1.sample(stream);
                        e / g
                    })
                    .collect())
            }
            // radial coordinate s = sum x by inverse CDF (density on (0,1)
            // proportional to s^{p+n-1}), then uniform placement on the slice
            SamplerKind::PowerSimplex { dim, power } => {
                let n = *dim;
                let s = stream.uniform().max(1e-300).powf(1.0 / (power + n as f64));
                let mut e: Vec<f64> = (0..n).map(|_| Exp1.sample(stream)).collect();
                let tot: f64 = e.iter().sum();
                for v in &mut e {
                    *v *= s / tot;
                }
                Ok(e)
            }
            SamplerKind::Affine { map, offset, inner } => {
                let x = inner.draw(stream)?;
                let y = map.matvec(&x);
                Ok(y.iter().zip(offset).map(|(a, b)| a + b).collect())
            }
            SamplerKind::Difference { inner } => {
                let a = inner.draw(stream)?;
                let b = inner.draw(stream)?;
                Ok(a.iter().zip(&b).map(|(x, y)| x - y).collect())
            }
            SamplerKind::Sum { first, second } => {
                let a = first.draw(stream)?;
                let b = second.draw(stream)?;
                Ok(a.iter().zip(&b).map(|(x, y)| x + y).collect())
            }
        }
    }

    pub fn draw_batch(&self, count: usize, stream: &mut SeededStream) -> Result<Vec<Vec<f64>>> {
        if let SamplerKind::Uniform { body } = &self.kind {
            return body.sample_uniform_batch(count, stream);
        }
        (0..count).map(|_| self.draw(stream)).collect()
    }
}

/// Sample mean and covariance with entrywise standard errors.
#[derive(Debug, Clone)]
pub struct MeanCov {
    pub mean: Vec<f64>,
    pub mean_stderr: Vec<f64>,
    pub cov: SquareMatrix,
    /// Approximate: the stderr of each centered cross-moment, ignoring the
    /// smaller mean-estimation term.
    pub cov_stderr: SquareMatrix,
    pub samples: usize,
}

/// Monte Carlo mean and covariance of a density.
pub fn mean_cov_mc(density: &Density, samples: usize, stream: &SeededStream) -> Result<MeanCov> {
    let n = density.dim();
    let sampler = density.sampler()?;
    let mut sub = stream.substream("mean-cov");
    let points = sampler.draw_batch(samples, &mut sub)?;
    let m = samples as f64;
    let mut mean = vec![0.0; n];
    for x in &points {
        for i in 0..n {
            mean[i] += x[i];
        }
    }
    for v in &mut mean {
        *v /= m;
    }
    let mut var = vec![0.0; n];
    let mut cov = SquareMatrix::zeros(n);
    let mut prod_var = SquareMatrix::zeros(n);
    for x in &points {
        for i in 0..n {
            let di = x[i] - mean[i];
            var[i] += di * di;
            for j in 0..n {
                let dj = x[j] - mean[j];
                cov[(i, j)] += di * dj;
                prod_var[(i, j)] += di * di * dj * dj;
            }
        }
    }
    let denom = (m - 1.0).max(1.0);
    let mut cov_stderr = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let c = cov[(i, j)] / denom;
            cov[(i, j)] = c;
            let second = prod_var[(i, j)] / m;
            cov_stderr[(i, j)] = ((second - c * c).max(0.0) / m).sqrt();
        }
    }
    let mean_stderr = var.iter().map(|&v| (v / denom / m).sqrt()).collect();
    Ok(MeanCov { mean, mean_stderr, cov, cov_stderr, samples })
}
