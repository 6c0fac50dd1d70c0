use super::settings::Settings;
use crate::optimize::{halton, maximize_on_sphere, nelder_mead, AscentOptions, NelderMeadOptions};
use crate::polyspace::{normalize, reproducing_kernel, HomPoly};
use crate::quadrature::{map_chunks_for, CloudKind};
use crate::rng::{substream, Purpose};
use crate::{Complex64, Error, Result};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Tolerance on `||Q|| = 1` required by the functionals.
pub const NORM_TOL: f64 = 1e-9;

pub(crate) fn check_normalized(q: &HomPoly) -> Result<()> {
    let nrm = q.norm();
    if (nrm - 1.0).abs() > NORM_TOL {
        return Err(Error::Domain(format!("polynomial must have unit norm (got {nrm}); normalize first")));
    }
    Ok(())
}

/// Supremum of `|Q|^2` on the sphere and a maximizer.
#[derive(Debug, Clone)]
pub struct SupResult {
    /// `T = sup |Q|^2` (at most 1 for unit `Q`).
    pub t: f64,
    /// Maximizer, phase-adjusted so that `Q(eta) = sqrt(T) >= 0`.
    pub argmax: Vec<Complex64>,
    pub converged_starts: usize,
    pub starts: usize,
}

/// Quasi-random sphere point from a Halton vector by inverse-CDF stick breaking.
fn halton_sphere_point(index: u64, d: usize) -> Vec<Complex64> {
    let u = halton(index, 2 * d);
    let mut remaining = 1.0;
    let mut z = Vec::with_capacity(d + 1);
    for j in 0..d {
        // v ~ Beta(1, d - j): inverse CDF 1 - (1 - u)^{1/(d-j)}
        let v = 1.0 - (1.0 - u[j]).powf(1.0 / (d - j) as f64);
        let theta = if j == 0 { 0.0 } else { TAU * u[d + j - 1] };
        z.push(Complex64::from_polar((v * remaining).sqrt(), theta));
        remaining *= 1.0 - v;
    }
    z.push(Complex64::from_polar(remaining.max(0.0).sqrt(), TAU * u[2 * d - 1]));
    z
}

/// Value and complex-form gradient `G_k = 2 Q conj(dQ/dzeta_k)` of `|Q|^2`.
pub(crate) fn modulus_and_gradient(q: &HomPoly, grads: &[HomPoly], z: &[Complex64]) -> (f64, Vec<Complex64>) {
    let mut scratch = Vec::new();
    let v = q.eval_with(z, &mut scratch);
    let g = grads
        .iter()
        .map(|dq| 2.0 * v * dq.eval_with(z, &mut scratch).conj())
        .collect();
    (v.norm_sqr(), g)
}

/// `T = sup_zeta |Q(zeta)|^2` by multistart projected gradient ascent: half of
/// the starts are Halton points, half the best of a seeded random cloud.
pub fn sup_modulus(q: &HomPoly, settings: &Settings) -> Result<SupResult> {
    check_normalized(q)?;
    let d = q.dim();
    let vars = q.vars();
    if q.degree() == 0 {
        let mut eta = vec![Complex64::new(0.0, 0.0); vars];
        eta[0] = Complex64::new(1.0, 0.0);
        return Ok(SupResult {
            t: q.coeffs()[0].norm_sqr(),
            argmax: eta,
            converged_starts: 1,
            starts: 1,
        });
    }
    let grads: Vec<HomPoly> = (0..vars).map(|k| q.derivative(k)).collect::<Result<_>>()?;
    let total = settings.starts.max(2);
    let quasi = total / 2;
    let random = total - quasi;
    let mut starts: Vec<Vec<Complex64>> = (1..=quasi as u64).map(|i| halton_sphere_point(i, d)).collect();

    let pool = (32 * random).max(1024);
    let mut scored: Vec<(f64, Vec<Complex64>)> = map_chunks_for(CloudKind::Sphere, Purpose::Multistart, d, pool, settings.seed, |_, pts| {
        let mut scratch = Vec::new();
        pts.chunks_exact(vars)
            .map(|z| (q.modulus_sqr_with(z, &mut scratch), z.to_vec()))
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    starts.extend(scored.into_iter().take(random).map(|(_, z)| z));

    let opts = AscentOptions::default();
    let results: Vec<_> = starts
        .par_iter()
        .map(|s| maximize_on_sphere(|z| modulus_and_gradient(q, &grads, z), s, opts))
        .collect();
    let converged_starts = results.iter().filter(|r| r.converged).count();
    let best = results
        .iter()
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one start");
    if converged_starts == 0 {
        return Err(Error::NonConvergence {
            message: format!("sup search: no start reached gradient norm {:e}", opts.grad_tol),
            best: best.value,
        });
    }
    if best.value > 1.0 + NORM_TOL {
        return Err(Error::Domain(format!(
            "sup |Q|^2 = {} exceeds 1 for a unit-norm polynomial",
            best.value
        )));
    }
    let mut eta = best.point.clone();
    let val = q.eval(&eta)?;
    if val.norm() > 0.0 {
        let phase = Complex64::from_polar(1.0, -val.arg() / q.degree() as f64);
        eta.iter_mut().for_each(|c| *c *= phase);
    }
    Ok(SupResult {
        t: best.value.min(1.0),
        argmax: eta,
        converged_starts,
        starts: starts.len(),
    })
}

/// `D_N(Q) = sqrt(2 (1 - sqrt(T)))`.
pub fn distance_from_sup(t: f64) -> f64 {
    (2.0 * (1.0 - t.clamp(0.0, 1.0).sqrt())).max(0.0).sqrt()
}

/// Distance from a unit `Q` to the set of reproducing kernels.
pub fn distance_to_kernels(q: &HomPoly, settings: &Settings) -> Result<(f64, SupResult)> {
    let sup = sup_modulus(q, settings)?;
    Ok((distance_from_sup(sup.t), sup))
}

/// Independent evaluation of `min_eta ||Q - K_N(., eta)||^2` with the literal
/// Bombieri norm of the difference, by Nelder–Mead over `x` in `R^{2d+2}` with
/// `eta = x/|x|`, started from the best points of a random cloud. The term
/// `(|x|^2 - 1)^2` removes the flat radial direction without moving the minimum.
pub fn min_kernel_distance_sqr(q: &HomPoly, settings: &Settings) -> Result<(f64, Vec<Complex64>)> {
    check_normalized(q)?;
    let d = q.dim();
    let n = q.degree();
    let vars = q.vars();
    let distance = |x: &[f64]| -> f64 {
        let z: Vec<Complex64> = x.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        match normalize(&z).and_then(|eta| reproducing_kernel(d, n, &eta)) {
            Ok(k) => (q - &k).norm_sqr(),
            Err(_) => f64::INFINITY,
        }
    };
    let objective = |x: &[f64]| -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        distance(x) + (r2 - 1.0).powi(2)
    };
    let mut rng = substream(settings.seed, Purpose::Optimizer, 0);
    let mut cloud: Vec<(f64, Vec<f64>)> = (0..4096)
        .map(|_| {
            let mut x: Vec<f64> = (0..2 * vars).map(|_| rng.sample(StandardNormal)).collect();
            let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= nrm);
            (distance(&x), x)
        })
        .collect();
    cloud.sort_by(|a, b| a.0.total_cmp(&b.0));
    let starts: Vec<Vec<f64>> = cloud.into_iter().take(6).map(|(_, x)| x).collect();
    let results: Vec<(f64, Vec<f64>)> = starts
        .into_par_iter()
        .map(|mut x| {
            let mut value = objective(&x);
            let mut step = 0.1;
            for _ in 0..4 {
                let r = nelder_mead(
                    objective,
                    &x,
                    NelderMeadOptions {
                        step,
                        max_evals: 20_000,
                        ftol: 1e-16,
                        xtol: 1e-12,
                    },
                );
                let improved = value - r.value;
                x = r.x;
                value = r.value;
                step *= 0.1;
                if improved.abs() < 1e-15 {
                    break;
                }
            }
            (distance(&x), x)
        })
        .collect();
    let (value, x) = results
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("nonempty search");
    let eta = normalize(&x.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect::<Vec<_>>())?;
    Ok((value, eta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn sup_examples() {
        let s = Settings::default();
        let q = HomPoly::coordinate_power(2, 4, 0).unwrap();
        let r = sup_modulus(&q, &s).unwrap();
        assert!((r.t - 1.0).abs() < 1e-12);
        assert!((r.argmax[0].norm() - 1.0).abs() < 1e-6);
        let v = q.eval(&r.argmax).unwrap();
        assert!(v.im.abs() < 1e-12 && v.re > 0.0);
        let h = 0.5f64.sqrt();
        let q = HomPoly::from_terms(1, 4, [(vec![4, 0].into(), c(h)), (vec![0, 4].into(), c(h))]).unwrap();
        let (dist, r) = distance_to_kernels(&q, &s).unwrap();
        assert!((r.t - 0.5).abs() < 1e-12);
        assert!((dist - (2.0 * (1.0 - 0.5f64.sqrt())).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let q = HomPoly::coordinate_power(1, 3, 0).unwrap().scale(c(2.0));
        assert!(matches!(sup_modulus(&q, &Settings::default()), Err(Error::Domain(_))));
    }

    #[test]
    fn minimization_agrees_with_sup_formula() {
        let mut rng = substream(11, Purpose::Polynomials, 0);
        let q = HomPoly::random_unit(1, 4, &mut rng).unwrap();
        let s = Settings::default();
        let (_, sup) = distance_to_kernels(&q, &s).unwrap();
        let (m, _) = min_kernel_distance_sqr(&q, &s).unwrap();
        assert!((2.0 * (1.0 - sup.t.sqrt()) - m).abs() < 1e-8, "{} vs {m}", 2.0 * (1.0 - sup.t.sqrt()));
    }

    #[test]
    fn halton_points_are_on_the_sphere() {
        for i in 1..20 {
            let z = halton_sphere_point(i, 3);
            let nrm: f64 = z.iter().map(|c| c.norm_sqr()).sum();
            assert!((nrm - 1.0).abs() < 1e-14);
        }
    }
}
