use super::profile::LevelProfile;
use crate::estimate::Estimate;
use crate::{Error, Result};
use serde::Serialize;

const GRID: usize = 4000;

/// Crossing of the empirical and extremal distribution functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Crossing {
    /// `mu` and `mu_0` agree within sampling noise.
    Degenerate { sup_gap: f64 },
    Found {
        /// `sup{t in (0, T) : mu(t) >= mu_0(t)}`.
        t_star: f64,
        /// `inf{s in (0, 1) : mu^{-1}(s) >= mu_0^{-1}(s)}`.
        s_star: f64,
        /// `|s_star - mu_0(t_star)|`, zero up to sampling noise.
        consistency: f64,
    },
}

/// Locates `t*` and `s*`; both searches scan a uniform grid and then bisect on
/// the last (first) sign change of the empirical difference.
pub fn crossing_points(profile: &LevelProfile) -> Crossing {
    let ext = profile.extremal();
    let n = profile.len() as f64;
    let sup_gap = profile.sup_distance_to_extremal();
    if sup_gap <= 2.5 / n.sqrt() {
        return Crossing::Degenerate { sup_gap };
    }
    let t_sup = profile.t_sup();
    let diff = |t: f64| profile.mu(t) - ext.mu(t);
    let mut last = None;
    for i in 1..GRID {
        let t = t_sup * i as f64 / GRID as f64;
        if diff(t) >= 0.0 {
            last = Some(i);
        }
    }
    let Some(i) = last else {
        return Crossing::Degenerate { sup_gap };
    };
    let (mut lo, mut hi) = (t_sup * i as f64 / GRID as f64, t_sup * (i + 1) as f64 / GRID as f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if diff(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t_star = lo;

    let sdiff = |s: f64| profile.mu_inverse_unchecked(s) - ext.mu_inverse(s);
    let mut first = None;
    for i in 1..GRID {
        let s = i as f64 / GRID as f64;
        if sdiff(s) >= 0.0 {
            first = Some(i);
            break;
        }
    }
    let s_star = match first {
        Some(i) => {
            let (mut lo, mut hi) = ((i - 1) as f64 / GRID as f64, i as f64 / GRID as f64);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if mid > 0.0 && sdiff(mid) >= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            hi
        }
        None => 1.0,
    };
    Crossing::Found {
        t_star,
        s_star,
        consistency: (s_star - ext.mu(t_star)).abs(),
    }
}

/// The two deficit integrals between the empirical and extremal profiles.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Deficits {
    /// `int_0^s (mu_0^{-1} - mu^{-1})`.
    pub inverse: Estimate,
    /// `int_0^t (mu - mu_0)`.
    pub direct: Estimate,
}

/// `int_0^s_hat (mu_0^{-1} - mu^{-1})` and `int_0^t_hat (mu - mu_0)`,
/// both integrated exactly on the empirical step functions.
pub fn deficit_integrals(profile: &LevelProfile, s_hat: f64, t_hat: f64) -> Result<Deficits> {
    if !(0.0..=1.0).contains(&s_hat) || t_hat < 0.0 {
        return Err(Error::Domain(format!("deficit integrals need s in [0,1], t >= 0 (got {s_hat}, {t_hat})")));
    }
    let ext = profile.extremal();
    let inverse = Estimate::exact(ext.integral_mu_inverse(s_hat)).minus(&profile.integral_mu_inverse(s_hat));
    let direct = profile.integral_mu(t_hat).minus(&Estimate::exact(ext.integral_mu(t_hat)));
    Ok(Deficits { inverse, direct })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyspace::HomPoly;

    #[test]
    fn extremal_profile_is_degenerate() {
        let q = HomPoly::coordinate_power(1, 4, 0).unwrap();
        let p = LevelProfile::sample(&q, 100_000, 1, Some(1.0)).unwrap();
        assert!(matches!(crossing_points(&p), Crossing::Degenerate { .. }));
        let def = deficit_integrals(&p, 0.4, 0.3).unwrap();
        assert!(def.inverse.value.abs() < 4.0 * def.inverse.err());
        assert!(def.direct.value.abs() < 4.0 * def.direct.err());
    }
}
