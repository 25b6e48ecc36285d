//! Essential supports of convex measures: the superlevel set
//! `K_f = { f >= c0^n ||f|| }` carries at least half of the mass (convex
//! case) or `1 - (1/5)^n` of it (log-concave case), and its volume brackets
//! `||f||^{-1/n}` from both sides.

use crate::bodies::{linear_image, Body, Estimate};
use crate::checks::CheckResult;
use crate::entropy::{entropy_analytic, entropy_plugin_mc};
use crate::measures::Density;
use crate::rng::SeededStream;
use crate::{Error, Result, MAX_MC_DIM, TOL_LP};

/// `c0(beta0) = exp(-32 beta0 / (beta0 - 1))` for the convex-measure mass
/// bound; requires `beta0 > 1`.
pub fn c0_convex(beta0: f64) -> Result<f64> {
    if !(beta0 > 1.0) {
        return Err(Error::Precondition(format!("c0_convex needs beta0 > 1, got {beta0}")));
    }
    Ok((-32.0 * beta0 / (beta0 - 1.0)).exp())
}

/// The log-concave constants `(c0, c1) = (e^{-8}, 1/5)`.
pub fn c0_logconcave() -> (f64, f64) {
    ((-8.0f64).exp(), 0.2)
}

/// The level-set region of an essential support.
///
/// Each family admits an exact parametric body, except the power-simplex
/// shell (the density increases toward the face `sum x = 1`, so the level
/// set is a simplex minus a smaller simplex, not convex); the shell is kept
/// as a membership predicate and handled only by Monte Carlo mass/volume.
#[derive(Debug, Clone)]
pub enum SupportRegion {
    Body(Body),
    SimplexShell { dim: usize, lower: f64 },
}

impl SupportRegion {
    pub fn dim(&self) -> usize {
        match self {
            SupportRegion::Body(b) => b.dim(),
            SupportRegion::SimplexShell { dim, .. } => *dim,
        }
    }

    pub fn as_body(&self) -> Option<&Body> {
        match self {
            SupportRegion::Body(b) => Some(b),
            SupportRegion::SimplexShell { .. } => None,
        }
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        match self {
            SupportRegion::Body(b) => b.contains(x),
            SupportRegion::SimplexShell { dim, lower } => {
                if x.len() != *dim {
                    return Err(Error::DimensionMismatch(*dim, x.len()));
                }
                let s: f64 = x.iter().sum();
                Ok(x.iter().all(|&v| v >= -TOL_LP) && s <= 1.0 + TOL_LP && s >= lower - TOL_LP)
            }
        }
    }

    pub fn volume_exact(&self) -> Result<f64> {
        match self {
            SupportRegion::Body(b) => b.volume_exact(),
            // membership-only by design
            SupportRegion::SimplexShell { .. } => Err(Error::ExactVolumeUnavailable),
        }
    }

    pub fn volume_mc(&self, samples: usize, stream: &SeededStream) -> Result<Estimate> {
        match self {
            SupportRegion::Body(b) => b.volume_mc(samples, stream),
            SupportRegion::SimplexShell { dim, .. } => {
                let n = *dim;
                if n > MAX_MC_DIM {
                    return Err(Error::DimensionCap(n));
                }
                let mut sub = stream.substream("shell-volume");
                let mut hits = 0usize;
                let mut x = vec![0.0; n];
                for _ in 0..samples {
                    for v in x.iter_mut() {
                        *v = sub.uniform();
                    }
                    if self.contains(&x)? {
                        hits += 1;
                    }
                }
                Ok(Estimate::from_hits(hits, samples, 1.0))
            }
        }
    }
}

/// The essential support `K_f` at threshold `c0^n ||f||`.
#[derive(Debug, Clone)]
pub struct EssentialSupport {
    pub region: SupportRegion,
    pub c0: f64,
    /// The density threshold `c0^n ||f||`.
    pub level: f64,
}

/// Exact level-set body of an evaluable family at threshold `c0^n ||f||`.
pub fn essential_support(density: &Density, c0: f64) -> Result<EssentialSupport> {
    if !(0.0 < c0 && c0 < 1.0) {
        return Err(Error::Precondition(format!("c0 must lie in (0,1), got {c0}")));
    }
    let n = density.dim();
    let level = c0.powi(n as i32) * density.max_density()?;
    let region = support_region(density, c0)?;
    Ok(EssentialSupport { region, c0, level })
}

fn support_region(density: &Density, c0: f64) -> Result<SupportRegion> {
    let n = density.dim();
    let nf = n as f64;
    Ok(match density {
        // constant density: the level set is the body itself
        Density::UniformOnBody { body } => SupportRegion::Body(body.clone()),
        // (x-mu)^T Sigma^{-1} (x-mu) <= 2n ln(1/c0)
        Density::Gaussian { mean, cov } => {
            let t = 2.0 * nf * (1.0 / c0).ln();
            SupportRegion::Body(Body::Ellipsoid { center: mean.clone(), shape: cov.scale(t) })
        }
        // rate * sum x <= n ln(1/c0): simplex with vertices 0, (T/rate) e_i
        Density::ExponentialOrthant { rate, .. } => {
            let side = nf * (1.0 / c0).ln() / rate;
            SupportRegion::Body(orthant_simplex(n, side))
        }
        // (1 + sum x)^{-beta} >= c0^n: sum x <= c0^{-n/beta} - 1
        Density::ParetoOrthant { beta, .. } => {
            let side = c0.powf(-nf / beta) - 1.0;
            SupportRegion::Body(orthant_simplex(n, side))
        }
        // s^{1/kt} >= c0^n relative to the supremum at s = 1: s >= c0^{n kt}
        Density::PowerSimplex { kappa_tilde, .. } => {
            SupportRegion::SimplexShell { dim: n, lower: c0.powf(nf * kappa_tilde) }
        }
        Density::LinearPushforward { map, offset, density } => {
            match support_region(density, c0)? {
                SupportRegion::Body(inner) => {
                    let mapped = linear_image(map, &inner)?;
                    let shifted = if offset.is_empty() {
                        mapped
                    } else {
                        mapped.translate(offset)?
                    };
                    SupportRegion::Body(shifted)
                }
                SupportRegion::SimplexShell { .. } => {
                    return Err(Error::NoClosedFormLevelSet)
                }
            }
        }
        Density::SymmetrizedPair { .. } | Density::SumPair { .. } => {
            return Err(Error::NoClosedFormLevelSet)
        }
    })
}

/// Simplex `{ x >= 0, sum x <= side }`.
fn orthant_simplex(n: usize, side: f64) -> Body {
    let mut vertices = vec![vec![0.0; n]];
    for i in 0..n {
        let mut v = vec![0.0; n];
        v[i] = side;
        vertices.push(v);
    }
    Body::Simplex { vertices }
}

/// Monte Carlo mass of the essential support under its own law.
pub fn support_mass_mc(
    density: &Density,
    es: &EssentialSupport,
    samples: usize,
    stream: &SeededStream,
) -> Result<Estimate> {
    let sampler = density.sampler()?;
    let mut sub = stream.substream("support-mass");
    let mut hits = 0usize;
    for _ in 0..samples {
        let x = sampler.draw(&mut sub)?;
        if es.region.contains(&x)? {
            hits += 1;
        }
    }
    Ok(Estimate::from_hits(hits, samples, 1.0))
}

/// The two-sided volume bracket
/// `(1/2) ||f||^{-1/n} <= |K_f|^{1/n} <= c0^{-1} ||f||^{-1/n}`,
/// with `|K_f|` exact where available and Monte Carlo otherwise.
pub fn check_support_volume(
    density: &Density,
    es: &EssentialSupport,
    samples: usize,
    stream: &SeededStream,
) -> Result<Vec<CheckResult>> {
    let n = density.dim();
    let nf = n as f64;
    let max_f = density.max_density()?;
    let (vol, vol_stderr) = match es.region.volume_exact() {
        Ok(v) => (v, 0.0),
        Err(Error::ExactVolumeUnavailable) => {
            let e = es.region.volume_mc(samples, &stream.substream("5n-volume"))?;
            (e.value, e.stderr)
        }
        Err(e) => return Err(e),
    };
    if !(vol > 0.0) {
        return Err(Error::BadBody("essential support has zero volume"));
    }
    let side = vol.powf(1.0 / nf);
    // d(V^{1/n}) = V^{1/n} dV / (n V)
    let side_stderr = side * vol_stderr / (nf * vol);
    let seed = stream.root_seed();
    let instance = format!("c0={:.3e}", es.c0);
    let lower = CheckResult::statistical(
        "5n.lower",
        n,
        &instance,
        0.5 * max_f.powf(-1.0 / nf),
        side,
        side_stderr,
        seed,
    );
    let upper = CheckResult::statistical(
        "5n.upper",
        n,
        &instance,
        side,
        max_f.powf(-1.0 / nf) / es.c0,
        side_stderr,
        seed,
    );
    Ok(vec![lower, upper])
}

/// `H(X) / |K_f|^{2/n}`: the typical-set ratio. The bracketing constants are
/// existential, so the harness records the ratio per family sweep and
/// asserts only that it is positive, finite, and stable.
pub fn typset_ratio(
    density: &Density,
    es: &EssentialSupport,
    samples: usize,
    stream: &SeededStream,
) -> Result<Estimate> {
    let n = density.dim();
    let nf = n as f64;
    let ev = match entropy_analytic(density) {
        Ok(v) => v,
        Err(Error::NoClosedForm) => {
            entropy_plugin_mc(density, samples, &stream.substream("typset-h"))?
        }
        Err(e) => return Err(e),
    };
    let power = ev.power();
    let power_stderr = ev.power_stderr();
    let (vol, vol_stderr) = match es.region.volume_exact() {
        Ok(v) => (v, 0.0),
        Err(Error::ExactVolumeUnavailable) => {
            let e = es.region.volume_mc(samples, &stream.substream("typset-vol"))?;
            (e.value, e.stderr)
        }
        Err(e) => return Err(e),
    };
    let denom = vol.powf(2.0 / nf);
    let ratio = power / denom;
    let rel = ((power_stderr / power).powi(2) + (2.0 * vol_stderr / (nf * vol)).powi(2)).sqrt();
    Ok(Estimate { value: ratio, stderr: ratio * rel, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn c0_values() {
        assert_relative_eq!(c0_convex(2.0).unwrap(), (-64.0f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(c0_convex(3.0).unwrap(), (-48.0f64).exp(), max_relative = 1e-14);
        assert!(c0_convex(1.0).is_err());
        let (c0, c1) = c0_logconcave();
        assert_relative_eq!(c0, (-8.0f64).exp(), max_relative = 1e-15);
        assert_eq!(c1, 0.2);
        // beta0 -> inf limit of the convex constant is e^{-32}
        assert_relative_eq!(c0_convex(1e12).unwrap(), (-32.0f64).exp(), max_relative = 1e-9);
    }

    #[test]
    fn gaussian_level_set_is_pm_four_sigma() {
        let d = Density::standard_gaussian(1);
        let (c0, _) = c0_logconcave();
        let es = essential_support(&d, c0).unwrap();
        let body = es.region.as_body().unwrap();
        let (lo, hi) = body.bounding_box();
        assert_relative_eq!(lo[0], -4.0, epsilon = 1e-10);
        assert_relative_eq!(hi[0], 4.0, epsilon = 1e-10);
        // boundary point sits exactly on the level
        let f_boundary = d.density_eval(&[4.0]).unwrap();
        assert_relative_eq!(f_boundary, es.level, max_relative = 1e-10);
    }

    #[test]
    fn pareto_level_set_side() {
        // beta = 6, n = 2, c0 = c0_convex(3) = e^{-48}: side = e^{16} - 1
        let d = Density::pareto_orthant(2, 6.0).unwrap();
        let c0 = c0_convex(3.0).unwrap();
        let es = essential_support(&d, c0).unwrap();
        let body = es.region.as_body().unwrap();
        let (_, hi) = body.bounding_box();
        assert_relative_eq!(hi[0], 16.0f64.exp() - 1.0, max_relative = 1e-10);
        // volume of the simplex: side^2 / 2
        let side = 16.0f64.exp() - 1.0;
        assert_relative_eq!(body.volume_exact().unwrap(), side * side / 2.0, max_relative = 1e-10);
    }

    #[test]
    fn exponential_level_set_volume() {
        // lambda = 1, n = 2, log-concave c0 = e^{-8}: |K_f| = 16^2/2 = 128
        let d = Density::exponential_orthant(2, 1.0).unwrap();
        let (c0, _) = c0_logconcave();
        let es = essential_support(&d, c0).unwrap();
        assert_relative_eq!(es.region.volume_exact().unwrap(), 128.0, max_relative = 1e-12);
    }

    #[test]
    fn uniform_support_is_the_body() {
        let body = Body::Box { lo: vec![0.0, 0.0], hi: vec![1.0, 1.0] };
        let d = Density::uniform(body);
        let es = essential_support(&d, 0.5).unwrap();
        assert_relative_eq!(es.region.volume_exact().unwrap(), 1.0);
        // mass is exactly 1
        let mass = support_mass_mc(&d, &es, 2_000, &SeededStream::new(1, "mass")).unwrap();
        assert_eq!(mass.value, 1.0);
    }

    #[test]
    fn power_simplex_shell_is_membership_only() {
        let d = Density::power_simplex(2, 1.0).unwrap();
        let es = essential_support(&d, 0.9).unwrap();
        assert!(matches!(es.region.volume_exact(), Err(Error::ExactVolumeUnavailable)));
        // lower threshold: s >= c0^{n kt} = 0.81
        match es.region {
            SupportRegion::SimplexShell { lower, .. } => {
                assert_relative_eq!(lower, 0.81, epsilon = 1e-12)
            }
            _ => panic!("expected a shell"),
        }
        // MC volume matches (1 - lower^n)/n! = (1 - 0.6561)/2
        let vol = es.region.volume_mc(200_000, &SeededStream::new(7, "shell")).unwrap();
        let truth = (1.0 - 0.81f64.powi(2)) / 2.0;
        assert!((vol.value - truth).abs() <= 3.0 * vol.stderr);
    }
}
