use super::region::RegionSpec;
use super::settings::Settings;
use crate::estimate::Estimate;
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::polyspace::{hermitian, normalize};
use crate::quadrature::{CloudKind, SampleCloud};
use crate::rng::{substream, Purpose};
use crate::{Complex64, Error, Result};
use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

const STARTS: usize = 16;

/// Fraenkel asymmetry of a region with the best-matching cap.
#[derive(Debug, Clone, Serialize)]
pub struct FraenkelResult {
    /// `min_eta sigma(Omega \ Delta) + sigma(Delta \ Omega)`, divided by `sigma(Omega)`.
    pub estimate: Estimate,
    /// Center of the best cap found.
    pub center: Vec<Complex64>,
    /// Measure of `Omega` used for the comparison cap.
    pub measure: f64,
}

fn to_point(x: &[f64]) -> Option<Vec<Complex64>> {
    let z: Vec<Complex64> = x.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
    normalize(&z).ok()
}

fn to_real(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// `A(Omega)` over caps of measure `sigma(Omega)`, for polynomials of degree `n`
/// in `d + 1` variables (the degree only matters for resolving cap levels).
///
/// All candidate centers are scored on one seeded sample cloud, and 16
/// Nelder–Mead starts are used: the principal axis of the region, points of the
/// region and random points.
pub fn fraenkel_asymmetry(region: &RegionSpec, n: usize, d: usize, settings: &Settings) -> Result<FraenkelResult> {
    let resolved = region.resolve(n, d, settings)?;
    let omega = resolved.measure();
    if !(omega > 0.0 && omega < 1.0) {
        return Err(Error::Domain(format!("region measure must lie in (0, 1), got {omega}")));
    }
    let cloud = SampleCloud::generate(CloudKind::Sphere, d, settings.samples, settings.seed)?;
    let inside: Vec<bool> = cloud.map(|z| resolved.contains(z, &mut Vec::new()));
    let count = cloud.len() as f64;
    let cos2 = 1.0 - omega.powf(1.0 / d as f64);
    let mismatch = |eta: &[Complex64]| -> f64 {
        let bad: usize = (0..cloud.len())
            .into_par_iter()
            .with_min_len(4096)
            .filter(|&i| inside[i] != (hermitian(cloud.point(i), eta).norm_sqr() > cos2))
            .count();
        bad as f64 / count
    };

    let mut starts: Vec<Vec<Complex64>> = Vec::with_capacity(STARTS);
    let members: Vec<usize> = (0..cloud.len()).filter(|&i| inside[i]).collect();
    if !members.is_empty() {
        let mut m = DMatrix::<Complex64>::zeros(d + 1, d + 1);
        for &i in &members {
            let z = nalgebra::DVector::from_column_slice(cloud.point(i));
            m += &z * z.adjoint();
        }
        let eig = m.symmetric_eigen();
        let top = eig.eigenvalues.iamax();
        starts.push(eig.eigenvectors.column(top).iter().copied().collect());
        let step = (members.len() / (STARTS / 2)).max(1);
        starts.extend(members.iter().step_by(step).take(STARTS / 2 - 1).map(|&i| cloud.point(i).to_vec()));
    }
    let mut rng = substream(settings.seed, Purpose::Multistart, 0);
    while starts.len() < STARTS {
        let z: Vec<Complex64> = (0..=d)
            .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        if let Ok(z) = normalize(&z) {
            starts.push(z);
        }
    }

    let opts = NelderMeadOptions {
        step: 0.2,
        max_evals: 1500,
        ftol: 1e-12,
        xtol: 1e-6,
    };
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for start in &starts {
        let r = nelder_mead(|x| to_point(x).map_or(f64::INFINITY, |eta| mismatch(&eta)), &to_real(start), opts);
        if let Some(eta) = to_point(&r.x) {
            if best.as_ref().is_none_or(|(v, _)| r.value < *v) {
                best = Some((r.value, eta));
            }
        }
    }
    let (p, center) = best.ok_or_else(|| Error::NonConvergence {
        message: "no Nelder–Mead start produced a valid cap center".into(),
        best: f64::NAN,
    })?;
    let stderr = (p * (1.0 - p) / count).sqrt() / omega;
    Ok(FraenkelResult {
        estimate: Estimate::with_stderr((p / omega).min(2.0), stderr),
        center,
        measure: omega,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::Indicator;

    #[test]
    fn cap_has_zero_asymmetry() {
        let s = 0.5f64.sqrt();
        let eta = vec![Complex64::new(s, 0.0), Complex64::new(0.0, s)];
        let region = RegionSpec::cap_with_measure(eta, 4, 0.3).unwrap();
        let r = fraenkel_asymmetry(&region, 4, 1, &Settings::default().with_samples(40_000)).unwrap();
        assert!(r.estimate.value < 0.02, "{:?}", r.estimate);
    }

    #[test]
    fn antipodal_caps_are_asymmetric() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let n = 4;
        let t = crate::functionals::cap_level(n, 1, 0.15).unwrap();
        let ind = Indicator::union_of_caps(n, vec![(vec![one, zero], t), (vec![zero, one], t)]).unwrap();
        let region = RegionSpec::Indicator(ind);
        let r = fraenkel_asymmetry(&region, n, 1, &Settings::default().with_samples(40_000)).unwrap();
        assert!(r.estimate.value >= 0.5 - 0.03 && r.estimate.value <= 2.0, "{:?}", r.estimate);
    }
}
