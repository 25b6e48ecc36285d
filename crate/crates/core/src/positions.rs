//! Isotropic and M-positions: covariance whitening, the ball-overlap
//! functional `M(A) = |A cap D|^{1/n} / |A|^{1/n}`, and a derivative-free
//! search for volume-preserving maps that maximize it.

use crate::bodies::{intersection_volume_mc, linear_image, Body, Estimate};
use crate::linalg::{sl_param, sl_param_len, whitening_map, SquareMatrix};
use crate::measures::{mean_cov_mc, Density};
use crate::rng::SeededStream;
use crate::special::ball_radius_for_volume;
use crate::{Error, Result};

/// A volume-preserving placement: the law of `map (x - t)` written as
/// `map x + translation` with `translation = -map t`.
#[derive(Debug, Clone)]
pub struct PositionResult {
    pub map: SquareMatrix,
    pub translation: Vec<f64>,
    pub objective: f64,
    pub objective_stderr: f64,
    pub iterations: usize,
    /// Set when the search stopped on its evaluation budget rather than on
    /// simplex convergence.
    pub budget_exhausted: bool,
}

impl PositionResult {
    /// Apply this placement to a law.
    pub fn apply(&self, density: &Density) -> Result<Density> {
        Density::pushforward_affine(self.map.clone(), self.translation.clone(), density.clone())
    }
}

/// Translate by minus the mean, then whiten the covariance: the output law
/// has mean zero, covariance a scalar multiple of the identity, and the
/// linear part has determinant one. Mean and covariance are exact for
/// Gaussians and Monte Carlo otherwise.
pub fn isotropic_map(
    density: &Density,
    samples: usize,
    stream: &SeededStream,
) -> Result<PositionResult> {
    let n = density.dim();
    let (mean, cov, cov_rel_err) = match exact_mean_cov(density) {
        Some((mean, cov)) => (mean, cov, 0.0),
        None => {
            let mc = mean_cov_mc(density, samples, &stream.substream("isotropic"))?;
            let mut rel: f64 = 0.0;
            for i in 0..n {
                let c = mc.cov[(i, i)];
                if c > 0.0 {
                    rel = rel.max(mc.cov_stderr[(i, i)] / c);
                }
            }
            (mc.mean, mc.cov, rel)
        }
    };
    let w = whitening_map(&cov)?;
    let translation: Vec<f64> = w.matvec(&mean).iter().map(|v| -v).collect();
    // the isotropized common directional second moment
    let objective = cov.det().powf(1.0 / n as f64);
    Ok(PositionResult {
        map: w,
        translation,
        objective,
        objective_stderr: objective * cov_rel_err,
        iterations: 0,
        budget_exhausted: false,
    })
}

// Closed-form mean and covariance for the families that have one.
fn exact_mean_cov(density: &Density) -> Option<(Vec<f64>, SquareMatrix)> {
    match density {
        Density::Gaussian { mean, cov } => Some((mean.clone(), cov.clone())),
        Density::UniformOnBody { body } => {
            let n = body.dim();
            match body {
                Body::Ball { center, radius } => Some((
                    center.clone(),
                    SquareMatrix::identity(n).scale(radius * radius / (n as f64 + 2.0)),
                )),
                Body::Ellipsoid { center, shape } => {
                    Some((center.clone(), shape.scale(1.0 / (n as f64 + 2.0))))
                }
                Body::Box { lo, hi } => {
                    let mean: Vec<f64> = lo.iter().zip(hi).map(|(l, h)| 0.5 * (l + h)).collect();
                    let diag: Vec<f64> =
                        lo.iter().zip(hi).map(|(l, h)| (h - l) * (h - l) / 12.0).collect();
                    Some((mean, SquareMatrix::from_diag(&diag)))
                }
                _ => None,
            }
        }
        _ => None,
    }
}

/// The squared isotropic constant with its anisotropy diagnostic.
#[derive(Debug, Clone)]
pub struct IsotropicConstant {
    pub l2: Estimate,
    /// Set when the sampled covariance deviates from a scalar matrix by
    /// more than 5% plus noise; the law should be isotropized first.
    pub anisotropy_warning: bool,
}

/// `L^2 = ||f||^{2/n} sigma^2`, with `sigma^2` the common directional second
/// moment about the origin. Expects the density in isotropic position.
pub fn isotropic_constant(
    density: &Density,
    samples: usize,
    stream: &SeededStream,
) -> Result<IsotropicConstant> {
    let n = density.dim();
    let nf = n as f64;
    let max_f = density.max_density()?;
    let mc = mean_cov_mc(density, samples, &stream.substream("l2"))?;
    let mut second = 0.0;
    let mut second_var = 0.0;
    for i in 0..n {
        second += mc.cov[(i, i)] + mc.mean[i] * mc.mean[i];
        second_var += mc.cov_stderr[(i, i)].powi(2);
    }
    let sigma2 = second / nf;
    let sigma2_stderr = second_var.sqrt() / nf;
    let scale = max_f.powf(2.0 / nf);
    let mut warn = false;
    for i in 0..n {
        if mc.mean[i].abs() > 0.05 * sigma2.sqrt() + 5.0 * mc.mean_stderr[i] {
            warn = true;
        }
        for j in 0..n {
            let expect = if i == j { sigma2 } else { 0.0 };
            if (mc.cov[(i, j)] - expect).abs() > 0.05 * sigma2 + 5.0 * mc.cov_stderr[(i, j)] {
                warn = true;
            }
        }
    }
    Ok(IsotropicConstant {
        l2: Estimate {
            value: scale * sigma2,
            stderr: scale * sigma2_stderr,
            samples,
        },
        anisotropy_warning: warn,
    })
}

/// `M(A)` evaluated at the origin-centered ball `D` of volume `|A|`:
/// `(|A cap D| / |A|)^{1/n}`.
pub fn m_functional(body: &Body, samples: usize, stream: &SeededStream) -> Result<Estimate> {
    let n = body.dim();
    let nf = n as f64;
    let (vol, vol_stderr) = match body.volume_exact() {
        Ok(v) => (v, 0.0),
        Err(Error::ExactVolumeUnavailable) => {
            let e = body.volume_mc(samples, &stream.substream("m-vol"))?;
            (e.value, e.stderr)
        }
        Err(e) => return Err(e),
    };
    if !(vol > 0. && vol.is_finite()) {
        return Err(Error::BadBody("M functional needs positive finite volume"));
    }
    let ball = Body::Ball { center: vec![0.0; n], radius: ball_radius_for_volume(n, vol) };
    let inter = intersection_volume_mc(body, &ball, samples, &stream.substream("m-inter"))?;
    if inter.value <= 0.0 {
        return Ok(Estimate { value: 0.0, stderr: 0.0, samples });
    }
    let ratio = inter.value / vol;
    let value = ratio.powf(1.0 / nf);
    let rel = ((inter.stderr / inter.value).powi(2) + (vol_stderr / vol).powi(2)).sqrt();
    Ok(Estimate { value, stderr: value * rel / nf, samples })
}

/// Options for the M-position search.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub restarts: usize,
    pub init_step: f64,
    pub ftol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { restarts: 3, init_step: 0.6, ftol: 1e-4 }
    }
}

/// Maximize `m_functional(u(A))` over volume-preserving `u = sl_param(theta)`
/// by Nelder-Mead with common random numbers across evaluations.
///
/// Never returns a map scoring below the identity on the shared evaluation
/// stream; the reported objective comes from a held-out stream with a
/// larger sample budget so the optimizer's selection noise does not inflate
/// it. `budget` caps the total number of objective evaluations.
pub fn m_position_search(
    body: &Body,
    budget: usize,
    samples_per_eval: usize,
    stream: &SeededStream,
) -> Result<PositionResult> {
    m_position_search_with(body, budget, samples_per_eval, stream, SearchOptions::default())
}

pub fn m_position_search_with(
    body: &Body,
    budget: usize,
    samples_per_eval: usize,
    stream: &SeededStream,
    opts: SearchOptions,
) -> Result<PositionResult> {
    let n = body.dim();
    let p = sl_param_len(n);
    let mut evals = 0usize;
    let mut failure: Option<Error> = None;

    // Common random numbers: every evaluation reuses the same substream
    // label, so optimizer comparisons see correlated noise.
    let eval = |theta: &[f64], evals: &mut usize, failure: &mut Option<Error>| -> f64 {
        *evals += 1;
        let u = sl_param(theta, n);
        match linear_image(&u, body)
            .and_then(|img| m_functional(&img, samples_per_eval, &stream.substream("crn")))
        {
            Ok(e) => e.value,
            Err(e) => {
                *failure = Some(e);
                f64::NEG_INFINITY
            }
        }
    };

    let origin = vec![0.0; p];
    let identity_score = eval(&origin, &mut evals, &mut failure);
    if let Some(e) = failure.take() {
        return Err(e);
    }

    let mut best_theta = origin.clone();
    let mut best_score = identity_score;
    let mut exhausted = false;
    let restarts = opts.restarts.max(1);
    for round in 0..restarts {
        if evals >= budget {
            exhausted = true;
            break;
        }
        let step = opts.init_step / (1 << round.min(2)) as f64;
        let cap = ((budget - evals) / (restarts - round)).max(p + 2);
        let nm = NelderMead { max_evals: cap, step, ftol: opts.ftol };
        let (theta, score, used, hit_cap) =
            nm.maximize(&mut |t| eval(t, &mut evals, &mut failure), &best_theta);
        let _ = used;
        if failure.is_some() {
            return Err(failure.take().unwrap());
        }
        if score > best_score {
            best_score = score;
            best_theta = theta;
        }
        exhausted = hit_cap && evals >= budget;
    }

    // never-worse-than-identity contract, judged on the shared stream
    if best_score < identity_score {
        best_theta = origin;
    }
    let u = sl_param(&best_theta, n);
    let image = linear_image(&u, body)?;
    let held_out = m_functional(&image, samples_per_eval * 2, &stream.substream("final"))?;
    Ok(PositionResult {
        map: u,
        translation: vec![0.0; n],
        objective: held_out.value,
        objective_stderr: held_out.stderr,
        iterations: evals,
        budget_exhausted: exhausted,
    })
}

/// Put a convex measure in M-position: compute its essential support `K_f`,
/// recenter and rescale it to volume one, search for the map putting that
/// body in M-position, and apply the same (volume-preserving) map to the
/// law. The reported objective is `mu(u(X - t) in D)^{1/n}` with `D` the
/// unit-volume ball.
pub fn put_measure_m_position(
    density: &Density,
    c0: f64,
    budget: usize,
    samples: usize,
    stream: &SeededStream,
) -> Result<PositionResult> {
    let n = density.dim();
    let nf = n as f64;
    let es = crate::support::essential_support(density, c0)?;
    let k_body = es
        .region
        .as_body()
        .ok_or(Error::OracleUnavailable(
            "measure M-position needs a convex level-set body; the power-simplex \
             shell is membership-only",
        ))?
        .clone();
    let center = k_body.interior_point();
    let neg_center: Vec<f64> = center.iter().map(|v| -v).collect();
    let centered = k_body.translate(&neg_center)?;
    let unit = match centered.scale_to_unit_volume() {
        Ok(b) => b,
        Err(Error::ExactVolumeUnavailable) => {
            centered.scale_to_unit_volume_mc(samples, &stream.substream("kf-vol"))?
        }
        Err(e) => return Err(e),
    };
    let search = m_position_search(&unit, budget, samples, &stream.substream("search"))?;
    let u = search.map.clone();
    let translation: Vec<f64> = u.matvec(&center).iter().map(|v| -v).collect();

    // objective: mass of the unit-volume ball under the mapped law
    let ball = Body::Ball { center: vec![0.0; n], radius: ball_radius_for_volume(n, 1.0) };
    let sampler = density.sampler()?;
    let mut sub = stream.substream("objective");
    let mut hits = 0usize;
    for _ in 0..samples {
        let x = sampler.draw(&mut sub)?;
        let shifted: Vec<f64> = x.iter().zip(&center).map(|(a, b)| a - b).collect();
        if ball.contains(&u.matvec(&shifted))? {
            hits += 1;
        }
    }
    let mass = Estimate::from_hits(hits, samples, 1.0);
    let (objective, objective_stderr) = if mass.value > 0.0 {
        let v = mass.value.powf(1.0 / nf);
        (v, v * mass.stderr / (nf * mass.value))
    } else {
        (0.0, 0.0)
    };
    Ok(PositionResult {
        map: u,
        translation,
        objective,
        objective_stderr,
        iterations: search.iterations,
        budget_exhausted: search.budget_exhausted,
    })
}

// ---------------------------------------------------------------------------
// Nelder-Mead (maximization), reflection/expansion/contraction/shrink with
// the textbook coefficients.

struct NelderMead {
    max_evals: usize,
    step: f64,
    ftol: f64,
}

impl NelderMead {
    /// Returns (best point, best value, evaluations used, stopped-on-budget).
    fn maximize(
        &self,
        f: &mut dyn FnMut(&[f64]) -> f64,
        x0: &[f64],
    ) -> (Vec<f64>, f64, usize, bool) {
        let dim = x0.len();
        let mut used = 0usize;
        let mut eval = |x: &[f64], used: &mut usize| -> f64 {
            *used += 1;
            f(x)
        };
        let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(dim + 1);
        simplex.push((eval(x0, &mut used), x0.to_vec()));
        for i in 0..dim {
            let mut v = x0.to_vec();
            v[i] += self.step;
            simplex.push((eval(&v, &mut used), v));
        }
        let mut hit_cap = false;
        loop {
            // descending by value: best first
            simplex.sort_by(|a, b| b.0.total_cmp(&a.0));
            let spread = simplex[0].0 - simplex[dim].0;
            if spread.abs() <= self.ftol {
                break;
            }
            if used >= self.max_evals {
                hit_cap = true;
                break;
            }
            let centroid: Vec<f64> = (0..dim)
                .map(|j| simplex[..dim].iter().map(|(_, v)| v[j]).sum::<f64>() / dim as f64)
                .collect();
            let worst = simplex[dim].clone();
            let reflect: Vec<f64> = (0..dim)
                .map(|j| centroid[j] + (centroid[j] - worst.1[j]))
                .collect();
            let fr = eval(&reflect, &mut used);
            if fr > simplex[0].0 {
                let expand: Vec<f64> = (0..dim)
                    .map(|j| centroid[j] + 2.0 * (centroid[j] - worst.1[j]))
                    .collect();
                let fe = eval(&expand, &mut used);
                simplex[dim] = if fe > fr { (fe, expand) } else { (fr, reflect) };
            } else if fr > simplex[dim - 1].0 {
                simplex[dim] = (fr, reflect);
            } else {
                let contract: Vec<f64> = (0..dim)
                    .map(|j| centroid[j] + 0.5 * (worst.1[j] - centroid[j]))
                    .collect();
                let fc = eval(&contract, &mut used);
                if fc > worst.0 {
                    simplex[dim] = (fc, contract);
                } else {
                    // shrink toward the best vertex
                    let best = simplex[0].1.clone();
                    for entry in simplex.iter_mut().skip(1) {
                        for j in 0..dim {
                            entry.1[j] = best[j] + 0.5 * (entry.1[j] - best[j]);
                        }
                        entry.0 = eval(&entry.1, &mut used);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| b.0.total_cmp(&a.0));
        (simplex[0].1.clone(), simplex[0].0, used, hit_cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn nelder_mead_quadratic() {
        let nm = NelderMead { max_evals: 500, step: 0.5, ftol: 1e-10 };
        let mut f = |x: &[f64]| -((x[0] - 1.5).powi(2) + (x[1] + 0.5).powi(2));
        let (x, _, _, capped) = nm.maximize(&mut f, &[0.0, 0.0]);
        assert!(!capped);
        assert_relative_eq!(x[0], 1.5, epsilon = 1e-4);
        assert_relative_eq!(x[1], -0.5, epsilon = 1e-4);
    }

    #[test]
    fn isotropic_map_identity_for_standard_gaussian() {
        let d = Density::standard_gaussian(2);
        let pr = isotropic_map(&d, 1_000, &SeededStream::new(2, "iso")).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(pr.map[(i, j)], expect, epsilon = 1e-10);
            }
        }
        assert!(pr.translation.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn isotropic_map_whitens_diag_gaussian() {
        let d = Density::gaussian(
            vec![0.0, 0.0],
            SquareMatrix::from_diag(&[4.0, 1.0]),
        )
        .unwrap();
        let pr = isotropic_map(&d, 1_000, &SeededStream::new(3, "iso2")).unwrap();
        assert_relative_eq!(pr.map[(0, 0)], std::f64::consts::SQRT_2 / 2.0, epsilon = 1e-9);
        assert_relative_eq!(pr.map[(1, 1)], std::f64::consts::SQRT_2, epsilon = 1e-9);
        assert!((pr.map.det() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn m_functional_of_ball_is_one() {
        let ball = Body::Ball { center: vec![0.0, 0.0], radius: 0.7 };
        let est = m_functional(&ball, 20_000, &SeededStream::new(5, "mball")).unwrap();
        assert!((est.value - 1.0).abs() <= 3.0 * est.stderr + 1e-3, "{}", est.value);
    }
}
