use crate::estimate::Estimate;
use crate::functionals::{concentration, distance_from_sup, distance_to_kernels, wehrl_entropy, ConvexFn, RegionSpec, Settings};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::polyspace::{AffinePoly, HomPoly};
use crate::quadrature::{mc_mean, CloudKind};
use crate::{Complex64, Error, Result};
use serde::Serialize;
use std::f64::consts::PI;

/// Projective functionals of the rescaled polynomial at one degree.
#[derive(Debug, Clone, Serialize)]
pub struct FockPoint {
    #[serde(rename = "N")]
    pub n: usize,
    pub concentration: Estimate,
    pub entropy: Estimate,
    pub distance: f64,
    /// Concentration minus the Gaussian-weight oracle.
    pub concentration_gap: f64,
    /// `|gap| <= 5` combined standard errors.
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FockReport {
    pub d: usize,
    pub area: f64,
    pub phi: String,
    pub oracle_concentration: Estimate,
    pub oracle_entropy: Estimate,
    pub oracle_distance: f64,
    pub points: Vec<FockPoint>,
    /// `|value(N_last) - oracle| <= |value(N_first) - oracle| + 2 stderr`.
    pub converging: bool,
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// `q^N(w) = f(sqrt(N/pi) w)` as an element of the degree-`n` affine space.
pub fn rescale_to_degree(f: &AffinePoly, n: usize) -> Result<AffinePoly> {
    let scale = (n as f64 / PI).sqrt();
    let mut terms = Vec::new();
    for (alpha, c) in f.terms() {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let k: u32 = alpha.iter().sum();
        if k as usize > n {
            return Err(Error::Domain(format!("degree {n} is below the degree {k} of a term of f")));
        }
        terms.push((alpha.to_vec(), c * scale.powi(k as i32)));
    }
    AffinePoly::from_terms(f.dim(), n, terms)
}

/// `||F||^2 = sum |c_alpha|^2 alpha! / pi^{|alpha|}` in the Fock space with weight `e^{-pi |z|^2}`.
pub fn fock_norm_sqr(f: &AffinePoly) -> f64 {
    f.terms()
        .map(|(alpha, c)| {
            let k: u32 = alpha.iter().sum();
            c.norm_sqr() * alpha.iter().map(|&a| factorial(a)).product::<f64>() / PI.powi(k as i32)
        })
        .sum()
}

/// Squared radius of the ball of volume `area` in `C^d`.
fn ball_radius_sqr(d: usize, area: f64) -> f64 {
    (area * factorial(d as u32)).powf(1.0 / d as f64) / PI
}

fn affine_eval(h: &HomPoly, z: &[Complex64], buf: &mut Vec<Complex64>, scratch: &mut Vec<Complex64>) -> Complex64 {
    buf.clear();
    buf.push(Complex64::new(1.0, 0.0));
    buf.extend_from_slice(z);
    h.eval_with(buf, scratch)
}

/// Compares projective concentration on the rescaled ball, entropy and distance
/// of `f(sqrt(N/pi) w)` at each degree with the Fock-space values of `f`
/// computed by Monte Carlo under the Gaussian weight `e^{-pi |z|^2}`.
pub fn fock_limit_check(
    f: &AffinePoly,
    degrees: &[usize],
    area: f64,
    phi: &ConvexFn,
    settings: &Settings,
) -> Result<FockReport> {
    if degrees.is_empty() || degrees.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("degree list must be nonempty and increasing".into()));
    }
    if !(area > 0.0) {
        return Err(Error::Domain("ball volume must be positive".into()));
    }
    let d = f.dim();
    let norm2 = fock_norm_sqr(f);
    if !(norm2 > 0.0) {
        return Err(Error::Domain("f is zero".into()));
    }
    let h = f.as_homogeneous();
    let r2 = ball_radius_sqr(d, area);
    let density = |z: &[Complex64], s: &mut (Vec<Complex64>, Vec<Complex64>)| -> (f64, f64) {
        let w: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        let v = affine_eval(h, z, &mut s.0, &mut s.1).norm_sqr() / norm2;
        (v, w)
    };
    let init = || (Vec::new(), Vec::new());
    let oracle_concentration = mc_mean(CloudKind::Gaussian, d, settings.samples, settings.seed, init, |s, z| {
        let (v, w) = density(z, s);
        if w < r2 {
            v
        } else {
            0.0
        }
    })?;
    let oracle_entropy = mc_mean(CloudKind::Gaussian, d, settings.samples, settings.seed, init, |s, z| {
        let (v, w) = density(z, s);
        let u = (v * (-PI * w).exp()).clamp(0.0, 1.0);
        phi.eval(u) * (PI * w).exp()
    })?
    .scale(-1.0);
    let fock_value = |x: &[f64]| -> f64 {
        let z: Vec<Complex64> = x.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        let (v, w) = density(&z, &mut init());
        -(v * (-PI * w).exp())
    };
    let opts = NelderMeadOptions {
        step: 0.1,
        max_evals: 20_000,
        ftol: 1e-15,
        xtol: 1e-10,
    };
    let mut t_fock = 0.0f64;
    for start in [0.0, 0.3, -0.3] {
        let r = nelder_mead(fock_value, &vec![start; 2 * d], opts);
        t_fock = t_fock.max(-r.value);
    }
    let oracle_distance = distance_from_sup(t_fock.min(1.0));

    let mut points = Vec::with_capacity(degrees.len());
    for &n in degrees {
        let q = rescale_to_degree(f, n)?.homogenize().normalized()?;
        let mut e1 = vec![Complex64::new(0.0, 0.0); d + 1];
        e1[0] = Complex64::new(1.0, 0.0);
        // ball |w|^2 < (pi/N) R^2 is the cap |zeta_1|^2 > 1/(1 + pi R^2/N)
        let rn2 = PI * r2 / n as f64;
        let t = (1.0 + rn2).powi(-(n as i32));
        let c = concentration(&q, &RegionSpec::cap(e1, t)?, settings)?.estimate;
        let s = wehrl_entropy(&q, phi, settings)?.estimate;
        let (distance, _) = distance_to_kernels(&q, settings)?;
        let gap = c.value - oracle_concentration.value;
        let combined = c.err().hypot(oracle_concentration.err());
        points.push(FockPoint {
            n,
            concentration: c,
            entropy: s,
            distance,
            concentration_gap: gap,
            within_tolerance: gap.abs() <= 5.0 * combined,
        });
    }
    let first = points.first().expect("nonempty");
    let last = points.last().expect("nonempty");
    let converging = last.concentration_gap.abs()
        <= first.concentration_gap.abs() + 2.0 * last.concentration.err().hypot(oracle_concentration.err());
    Ok(FockReport {
        d,
        area,
        phi: phi.tag(),
        oracle_concentration,
        oracle_entropy,
        oracle_distance,
        points,
        converging,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fock_norm_of_monomials() {
        let f = AffinePoly::from_terms(1, 2, [(vec![2], Complex64::new(1.0, 0.0))]).unwrap();
        assert!((fock_norm_sqr(&f) - 2.0 / (PI * PI)).abs() < 1e-15);
    }
}
