use super::caps::{cap_level, cap_measure};
use super::settings::Settings;
use crate::estimate::Estimate;
use crate::levelsets::LevelProfile;
use crate::polyspace::{check_unit, hermitian, HomPoly};
use crate::quadrature::{mc_mean_for, CloudKind};
use crate::rng::Purpose;
use crate::{Complex64, Error, Result};
use std::fmt;
use std::sync::Arc;

type Predicate = Arc<dyn Fn(&[Complex64]) -> bool + Send + Sync>;

/// Region given by a membership predicate and a declared measure.
#[derive(Clone)]
pub struct Indicator {
    name: String,
    predicate: Predicate,
    declared_measure: f64,
}

impl fmt::Debug for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Indicator")
            .field("name", &self.name)
            .field("declared_measure", &self.declared_measure)
            .finish()
    }
}

impl Indicator {
    pub fn new<F>(name: &str, declared_measure: f64, predicate: F) -> Self
    where
        F: Fn(&[Complex64]) -> bool + Send + Sync + 'static,
    {
        Self {
            name: name.to_string(),
            predicate: Arc::new(predicate),
            declared_measure,
        }
    }

    /// Union of caps `{|<zeta, eta_i>|^{2N} > t_i}`; the declared measure is the
    /// sum of the cap measures (exact when the caps are disjoint).
    pub fn union_of_caps(n: usize, caps: Vec<(Vec<Complex64>, f64)>) -> Result<Self> {
        let mut total = 0.0;
        let mut prepared = Vec::with_capacity(caps.len());
        for (eta, t) in caps {
            check_unit(&eta, 1e-10)?;
            total += cap_measure(n, eta.len() - 1, t)?;
            prepared.push((eta, t.powf(1.0 / n as f64)));
        }
        Ok(Self::new("union_of_caps", total.min(1.0), move |z| {
            prepared.iter().any(|(eta, c)| hermitian(z, eta).norm_sqr() > *c)
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn declared_measure(&self) -> f64 {
        self.declared_measure
    }

    pub fn contains(&self, z: &[Complex64]) -> bool {
        (self.predicate)(z)
    }
}

/// A measurable subset of the sphere.
#[derive(Debug, Clone)]
pub enum RegionSpec {
    /// `Delta_t(eta) = {|zeta . conj(eta)|^{2N} > t}`.
    Cap { eta: Vec<Complex64>, t: f64 },
    CapComplement { eta: Vec<Complex64>, t: f64 },
    Indicator(Indicator),
    /// `{|Q|^2 > mu^{-1}(omega)}`.
    Superlevel { q: HomPoly, omega: f64 },
}

/// Region with every threshold resolved, ready for membership tests.
#[derive(Debug, Clone)]
pub enum ResolvedRegion {
    Cap { eta: Vec<Complex64>, cos2: f64, complement: bool, measure: f64 },
    Indicator(Indicator),
    Superlevel { q: HomPoly, level: f64, measure: f64 },
}

impl ResolvedRegion {
    pub fn contains(&self, z: &[Complex64], scratch: &mut Vec<Complex64>) -> bool {
        match self {
            ResolvedRegion::Cap { eta, cos2, complement, .. } => (hermitian(z, eta).norm_sqr() > *cos2) != *complement,
            ResolvedRegion::Indicator(ind) => ind.contains(z),
            ResolvedRegion::Superlevel { q, level, .. } => q.modulus_sqr_with(z, scratch) > *level,
        }
    }

    pub fn measure(&self) -> f64 {
        match self {
            ResolvedRegion::Cap { measure, .. } | ResolvedRegion::Superlevel { measure, .. } => *measure,
            ResolvedRegion::Indicator(ind) => ind.declared_measure,
        }
    }
}

impl RegionSpec {
    pub fn cap(eta: Vec<Complex64>, t: f64) -> Result<Self> {
        check_unit(&eta, 1e-10)?;
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Domain(format!("cap level must lie in (0, 1), got {t}")));
        }
        Ok(RegionSpec::Cap { eta, t })
    }

    /// Cap of measure `omega` for degree `n`.
    pub fn cap_with_measure(eta: Vec<Complex64>, n: usize, omega: f64) -> Result<Self> {
        let d = eta.len() - 1;
        Self::cap(eta, cap_level(n, d, omega)?)
    }

    /// Measure of the region for polynomials of degree `n` (declared for indicators).
    pub fn measure(&self, n: usize) -> Result<f64> {
        match self {
            RegionSpec::Cap { eta, t } => cap_measure(n, eta.len() - 1, *t),
            RegionSpec::CapComplement { eta, t } => Ok(1.0 - cap_measure(n, eta.len() - 1, *t)?),
            RegionSpec::Indicator(ind) => Ok(ind.declared_measure),
            RegionSpec::Superlevel { omega, .. } => Ok(*omega),
        }
    }

    /// Resolves thresholds; a superlevel region estimates `mu^{-1}(omega)` from a level profile.
    pub fn resolve(&self, n: usize, d: usize, settings: &Settings) -> Result<ResolvedRegion> {
        let check_dim = |len: usize| {
            if len != d + 1 {
                Err(Error::Shape(format!("region center has {len} components, expected {}", d + 1)))
            } else {
                Ok(())
            }
        };
        match self {
            RegionSpec::Cap { eta, t } | RegionSpec::CapComplement { eta, t } => {
                check_dim(eta.len())?;
                let complement = matches!(self, RegionSpec::CapComplement { .. });
                let m = cap_measure(n, d, *t)?;
                Ok(ResolvedRegion::Cap {
                    eta: eta.clone(),
                    cos2: t.powf(1.0 / n as f64),
                    complement,
                    measure: if complement { 1.0 - m } else { m },
                })
            }
            RegionSpec::Indicator(ind) => Ok(ResolvedRegion::Indicator(ind.clone())),
            RegionSpec::Superlevel { q, omega } => {
                if q.dim() != d {
                    return Err(Error::Shape("superlevel polynomial has a different dimension".into()));
                }
                if !(*omega > 0.0 && *omega < 1.0) {
                    return Err(Error::Domain(format!("superlevel measure must lie in (0, 1), got {omega}")));
                }
                let profile = LevelProfile::sample(q, settings.samples, settings.seed, None)?;
                Ok(ResolvedRegion::Superlevel {
                    q: q.clone(),
                    level: profile.mu_inverse(*omega)?,
                    measure: *omega,
                })
            }
        }
    }

    /// Monte Carlo estimate of the measure, for validating declared measures.
    pub fn estimate_measure(&self, n: usize, d: usize, settings: &Settings) -> Result<Estimate> {
        let region = self.resolve(n, d, settings)?;
        mc_mean_for(CloudKind::Sphere, Purpose::Regions, d, settings.samples, settings.seed, Vec::new, |s, z| {
            f64::from(u8::from(region.contains(z, s)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_membership_matches_measure() {
        let eta = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let region = RegionSpec::cap_with_measure(eta, 3, 0.25).unwrap();
        assert!((region.measure(3).unwrap() - 0.25).abs() < 1e-14);
        let s = Settings::default().with_samples(100_000);
        let est = region.estimate_measure(3, 1, &s).unwrap();
        assert!((est.value - 0.25).abs() < 4.0 * est.err());
    }
}
