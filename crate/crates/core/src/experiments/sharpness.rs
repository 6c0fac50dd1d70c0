use super::generators::sharpness_polynomial;
use crate::estimate::Estimate;
use crate::functionals::{
    distance_from_sup, entropy_deficit, min_kernel_distance_sqr, optimal_concentration, relative_concentration_deficit,
    sup_modulus, ConvexFn, Settings,
};
use crate::{Error, Result};
use serde::Serialize;

/// Slopes the sharpness family is expected to show.
pub const EXPECTED_DISTANCE_SLOPE: f64 = 1.0;
pub const EXPECTED_DEFICIT_SLOPE: f64 = 2.0;

/// One member of the family `(zeta_1^N + eps zeta_1^{N-1} zeta_2)/sqrt(1 + eps^2/N)`.
#[derive(Debug, Clone, Serialize)]
pub struct SharpnessPoint {
    pub eps: f64,
    pub t_sup: f64,
    pub distance: f64,
    /// `min_eta ||Q - K_N(., eta)||^2` by direct minimization, as a cross-check of `D^2`.
    pub distance_sqr_direct: f64,
    pub entropy_deficit: Estimate,
    pub concentration_deficit: Option<Estimate>,
    /// `entropy_deficit / D^2`.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpnessReport {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub phi: String,
    pub omega: Option<f64>,
    pub points: Vec<SharpnessPoint>,
    /// Least-squares slope of `log D` against `log eps` over `eps > 0`.
    pub distance_slope: f64,
    pub deficit_slope: f64,
    pub concentration_slope: Option<f64>,
    /// `max ratio / min ratio` over `eps > 0`.
    pub ratio_spread: f64,
}

/// Least-squares slope of `log y` on `log x` over points with `x, y > 0`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return Err(Error::Domain("a log-log fit needs two positive points".into()));
    }
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("log-log fit needs distinct abscissae".into()));
    }
    Ok(sxy / sxx)
}

/// Distance, entropy deficit and (if `omega` is given) concentration deficit
/// along the sharpness family, with fitted log-log exponents.
pub fn sharpness_family(
    d: usize,
    n: usize,
    eps: &[f64],
    phi: &ConvexFn,
    omega: Option<f64>,
    settings: &Settings,
) -> Result<SharpnessReport> {
    if eps.is_empty() || eps.iter().any(|e| !(*e >= 0.0 && *e <= 1.0)) {
        return Err(Error::Domain("eps values must lie in [0, 1]".into()));
    }
    let mut points = Vec::with_capacity(eps.len());
    for &e in eps {
        let q = sharpness_polynomial(d, n, e)?;
        let sup = sup_modulus(&q, settings)?;
        let distance = distance_from_sup(sup.t);
        let (direct, _) = min_kernel_distance_sqr(&q, settings)?;
        let (deficit, _) = entropy_deficit(&q, phi, settings, Some(&sup.argmax))?;
        let concentration_deficit = match omega {
            Some(w) => {
                let c = optimal_concentration(&q, w, settings)?;
                Some(relative_concentration_deficit(&c.estimate, n, d, w)?)
            }
            None => None,
        };
        let d2 = distance * distance;
        points.push(SharpnessPoint {
            eps: e,
            t_sup: sup.t,
            distance,
            distance_sqr_direct: direct,
            entropy_deficit: deficit,
            concentration_deficit,
            ratio: (d2 > 0.0 && e > 0.0).then(|| deficit.value / d2),
        });
    }
    let distance_slope = loglog_slope(&points.iter().map(|p| (p.eps, p.distance)).collect::<Vec<_>>())?;
    let deficit_slope = loglog_slope(&points.iter().map(|p| (p.eps, p.entropy_deficit.value)).collect::<Vec<_>>())?;
    let concentration_slope = if omega.is_some() {
        let pts: Vec<(f64, f64)> = points
            .iter()
            .filter_map(|p| p.concentration_deficit.map(|c| (p.eps, c.value)))
            .collect();
        loglog_slope(&pts).ok()
    } else {
        None
    };
    let ratios: Vec<f64> = points.iter().filter_map(|p| p.ratio).collect();
    let ratio_spread = if ratios.iter().all(|r| *r > 0.0) && !ratios.is_empty() {
        ratios.iter().cloned().fold(f64::MIN, f64::max) / ratios.iter().cloned().fold(f64::MAX, f64::min)
    } else {
        f64::INFINITY
    };
    Ok(SharpnessReport {
        d,
        n,
        phi: phi.tag(),
        omega,
        points,
        distance_slope,
        deficit_slope,
        concentration_slope,
        ratio_spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [0.1, 0.2, 0.4].iter().map(|&x| (x, 3.0 * x * x)).collect();
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
    }
}
