use super::profile::LevelProfile;
use super::stats::bonferroni_z;
use serde::Serialize;

/// Outcome of the differential-inequality or monotonicity audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditStatus {
    Pass,
    Violations,
    /// Sampling noise dominates the compared quantities on most of the grid.
    Inconclusive,
}

/// One grid point of the `mu'` check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SlopePoint {
    pub t: f64,
    pub h: f64,
    pub slope: f64,
    pub rhs: f64,
    /// Combined 1-sigma sampling noise of `slope - rhs`.
    pub noise: f64,
    /// Discretization-bias allowance.
    pub bias: f64,
    /// `slope - rhs > 3 noise + bias`.
    pub flagged: bool,
    /// `slope - rhs > z_B noise + bias` with the Bonferroni critical value `z_B`.
    pub significant: bool,
    pub inconclusive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OdeReport {
    pub t_lo: f64,
    pub t_hi: f64,
    pub points: Vec<SlopePoint>,
    pub flagged: usize,
    pub significant: usize,
    pub inconclusive: usize,
    pub status: AuditStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub checked: usize,
    pub significant: usize,
    pub status: AuditStatus,
}

/// Lower end `mu^{-1}(omega_tilde)` of the range where the inequality is asserted.
pub fn ode_range_start(profile: &LevelProfile, omega_tilde: f64) -> f64 {
    if omega_tilde >= 1.0 {
        0.0
    } else {
        profile.mu_inverse_unchecked(omega_tilde.max(1e-12))
    }
}

fn local_spacing(profile: &LevelProfile, t: f64) -> f64 {
    let v = profile.values();
    let n = v.len();
    let i = v.partition_point(|&x| x <= t).min(n - 1);
    let m = 50.min(n / 4).max(1);
    let lo = i.saturating_sub(m);
    let hi = (i + m).min(n - 1);
    if hi > lo {
        (v[hi] - v[lo]) / (hi - lo) as f64
    } else {
        0.0
    }
}

fn central_slope(profile: &LevelProfile, t: f64, h: f64) -> (f64, f64) {
    let n = profile.len() as f64;
    let p = (profile.count_above(t - h) - profile.count_above(t + h)) as f64 / n;
    (-p / (2.0 * h), (p * (1.0 - p) / n).sqrt() / (2.0 * h))
}

/// Compares central-difference slopes of `mu` with the extremal right-hand side
/// `-(d/(N t)) mu^{1-1/d}(1 - mu^{1/d})` on `grid` points of `(mu^{-1}(omega_tilde), T)`.
pub fn check_differential_inequality(profile: &LevelProfile, omega_tilde: f64, grid: usize) -> OdeReport {
    let ext = profile.extremal();
    let n = profile.len() as f64;
    let t_sup = profile.t_sup();
    let t_lo = ode_range_start(profile, omega_tilde);
    let z_b = bonferroni_z(0.05, grid);
    let mut points = Vec::with_capacity(grid);
    for i in 0..grid {
        let t = t_lo + (t_sup - t_lo) * (i as f64 + 0.5) / grid as f64;
        let h = (0.01 * t_sup).max(5.0 * local_spacing(profile, t));
        if t - 2.0 * h <= t_lo || t + 2.0 * h >= t_sup {
            continue;
        }
        let (slope, s_noise) = central_slope(profile, t, h);
        let (slope2, _) = central_slope(profile, t, 2.0 * h);
        let m = profile.mu(t);
        let rhs = ext.ode_rhs(t, m);
        // noise of the right-hand side through its derivative in mu
        let dm = 1e-6 * m.max(1e-12);
        let drhs = (ext.ode_rhs(t, (m + dm).min(1.0)) - ext.ode_rhs(t, (m - dm).max(0.0))) / (2.0 * dm);
        let r_noise = drhs.abs() * (m * (1.0 - m) / n).sqrt();
        let noise = s_noise.hypot(r_noise);
        let bias = (slope2 - slope).abs() / 3.0;
        let excess = slope - rhs;
        points.push(SlopePoint {
            t,
            h,
            slope,
            rhs,
            noise,
            bias,
            flagged: excess > 3.0 * noise + bias,
            significant: excess > z_b * noise + bias,
            inconclusive: 3.0 * noise >= rhs.abs(),
        });
    }
    let flagged = points.iter().filter(|p| p.flagged).count();
    let significant = points.iter().filter(|p| p.significant).count();
    let inconclusive = points.iter().filter(|p| p.inconclusive).count();
    let status = if points.is_empty() || 2 * inconclusive > points.len() {
        AuditStatus::Inconclusive
    } else if significant > 0 {
        AuditStatus::Violations
    } else {
        AuditStatus::Pass
    };
    OdeReport {
        t_lo,
        t_hi: t_sup,
        points,
        flagged,
        significant,
        inconclusive,
        status,
    }
}

/// Checks that `(mu^{1/d} - mu_0^{1/d}) / t^{1/N}` does not increase
/// significantly between consecutive points of a `grid`-point mesh of `(mu^{-1}(omega_tilde), T)`.
pub fn check_ratio_monotonicity(profile: &LevelProfile, omega_tilde: f64, grid: usize) -> MonotonicityReport {
    let ext = profile.extremal();
    let n = profile.len() as f64;
    let t_sup = profile.t_sup();
    let t_lo = ode_range_start(profile, omega_tilde);
    let di = 1.0 / profile.dim() as f64;
    let ni = 1.0 / profile.degree() as f64;
    let ratio = |t: f64| {
        let m = profile.mu(t);
        let r = (m.powf(di) - ext.mu(t).powf(di)) / t.powf(ni);
        // delta method: d(m^{1/d}) = (1/d) m^{1/d - 1} dm
        let sd = if m > 0.0 {
            di * m.powf(di - 1.0) * (m * (1.0 - m) / n).sqrt() / t.powf(ni)
        } else {
            0.0
        };
        (r, sd)
    };
    let ts: Vec<f64> = (1..=grid)
        .map(|i| t_lo + (t_sup - t_lo) * i as f64 / (grid + 1) as f64)
        .filter(|&t| t > 0.0 && profile.mu(t) * n >= 100.0)
        .collect();
    let pairs = ts.len().saturating_sub(1);
    let z_b = bonferroni_z(0.05, pairs.max(1));
    let mut significant = 0;
    for w in ts.windows(2) {
        let (a, sa) = ratio(w[0]);
        let (b, sb) = ratio(w[1]);
        // the two estimates are positively correlated, so the sum of variances is conservative
        if b - a > z_b * sa.hypot(sb) {
            significant += 1;
        }
    }
    let status = if pairs == 0 {
        AuditStatus::Inconclusive
    } else if significant > 0 {
        AuditStatus::Violations
    } else {
        AuditStatus::Pass
    };
    MonotonicityReport {
        checked: pairs,
        significant,
        status,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyspace::HomPoly;

    #[test]
    fn extremal_polynomial_has_no_violations() {
        let q = HomPoly::coordinate_power(2, 5, 0).unwrap();
        let p = LevelProfile::sample(&q, 400_000, 2, Some(1.0)).unwrap();
        let rep = check_differential_inequality(&p, 0.3, 50);
        assert_eq!(rep.significant, 0, "{:?}", rep.points.iter().filter(|x| x.significant).collect::<Vec<_>>());
        let mono = check_ratio_monotonicity(&p, 0.3, 50);
        assert_eq!(mono.significant, 0);
    }
}
