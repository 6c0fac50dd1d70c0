use super::caps::{cap_level, extremal_concentration};
use super::method::Method;
use super::region::{RegionSpec, ResolvedRegion};
use super::settings::Settings;
use super::sup::{check_normalized, sup_modulus};
use crate::estimate::{Estimate, MeanAccumulator};
use crate::polyspace::{binomial_f64, hermitian, incomplete_beta_int, unitary_with_first_column, HomPoly};
use crate::quadrature::{map_chunks, mc_mean, CloudKind};
use crate::{Complex64, Error, Result};
use serde::Serialize;

/// A concentration value with its provenance.
#[derive(Debug, Clone, Serialize)]
pub struct ConcentrationResult {
    pub estimate: Estimate,
    pub method: Method,
    /// Measure of the region used.
    pub measure: f64,
}

/// Exact `C_{N, Delta_t(eta)}(Q)`: after rotating `eta` to the pole, each
/// monomial contributes `(alpha!/N!) |a_alpha|^2 I_r(N + d - alpha_1, alpha_1 + 1)`
/// with `r = 1 - t^{1/N}`, and cross terms vanish by phase invariance of the cap.
pub fn cap_concentration(q: &HomPoly, eta: &[Complex64], t: f64) -> Result<f64> {
    if eta.len() != q.vars() {
        return Err(Error::Shape(format!("cap center has {} components, expected {}", eta.len(), q.vars())));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("cap level must lie in (0, 1), got {t}")));
    }
    let n = q.degree();
    let d = q.dim();
    let r = unitary_with_first_column(eta)?;
    // Q'(zeta) = Q(R zeta) puts the cap center at the pole
    let rotated = q.rotate(&r.adjoint())?;
    let radius = 1.0 - t.powf(1.0 / n.max(1) as f64);
    let basis = rotated.basis().clone();
    let mass: f64 = rotated
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .map(|(i, a)| {
            let a1 = basis.exponents(i)[0] as usize;
            a.norm_sqr() * basis.weight(i) * incomplete_beta_int(radius, n + d - a1, a1 + 1)
        })
        .sum();
    Ok((mass / rotated.norm_sqr()).clamp(0.0, 1.0))
}

fn check_measure(m: f64) -> Result<()> {
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::Domain(format!("region measure must lie in (0, 1), got {m}")));
    }
    Ok(())
}

/// `C_{N,Omega}(Q) = binom(N+d, N) int_Omega |Q|^2`: exact for caps and their
/// complements, Monte Carlo for indicator and superlevel regions.
pub fn concentration(q: &HomPoly, region: &RegionSpec, settings: &Settings) -> Result<ConcentrationResult> {
    check_normalized(q)?;
    let n = q.degree();
    let d = q.dim();
    match region {
        RegionSpec::Cap { eta, t } | RegionSpec::CapComplement { eta, t } => {
            let m = region.measure(n)?;
            check_measure(m)?;
            let c = cap_concentration(q, eta, *t)?;
            let value = if matches!(region, RegionSpec::Cap { .. }) { c } else { 1.0 - c };
            Ok(ConcentrationResult {
                estimate: Estimate::exact(value),
                method: Method::ClosedForm,
                measure: m,
            })
        }
        RegionSpec::Superlevel { q: p, omega } if p == q => {
            let r = optimal_concentration(q, *omega, settings)?;
            Ok(ConcentrationResult {
                estimate: r.estimate,
                method: r.method,
                measure: *omega,
            })
        }
        _ => {
            let resolved = region.resolve(n, d, settings)?;
            check_measure(resolved.measure())?;
            let binom = binomial_f64(n + d, d);
            let est = mc_mean(CloudKind::Sphere, d, settings.samples, settings.seed, Vec::new, |s, z| {
                if resolved.contains(z, s) {
                    q.modulus_sqr_with(z, s)
                } else {
                    0.0
                }
            })?;
            Ok(ConcentrationResult {
                estimate: Estimate {
                    value: (est.value * binom).clamp(0.0, 1.0),
                    stderr: est.stderr.map(|s| s * binom),
                },
                method: Method::MonteCarlo {
                    samples: settings.samples,
                    seed: settings.seed,
                },
                measure: resolved.measure(),
            })
        }
    }
}

/// Concentration on the superlevel set of measure `omega`.
#[derive(Debug, Clone, Serialize)]
pub struct OptimalConcentration {
    pub estimate: Estimate,
    /// Empirical level `mu^{-1}(omega)`.
    pub threshold: f64,
    pub method: Method,
    /// Center of the control cap (a maximizer of `|Q|^2`).
    pub argmax: Vec<Complex64>,
}

/// Concentration of `Q` on `{|Q|^2 > mu^{-1}(omega)}`, the best region of measure `omega`.
///
/// Uses the cap `Delta` of measure `omega` at a maximizer of `|Q|^2` as a control
/// variate: `C = C_Delta(Q) + binom E[(U - t)(1{U > t} - 1_Delta)]`, whose
/// correction term is pointwise nonnegative and small when `Q` is close to a kernel.
pub fn optimal_concentration(q: &HomPoly, omega: f64, settings: &Settings) -> Result<OptimalConcentration> {
    check_normalized(q)?;
    check_measure(omega)?;
    let n = q.degree();
    let d = q.dim();
    let vars = q.vars();
    let sup = sup_modulus(q, settings)?;
    let eta = sup.argmax.clone();
    let t_cap = cap_level(n, d, omega)?;
    let cos2 = t_cap.powf(1.0 / n as f64);
    let cap_value = cap_concentration(q, &eta, t_cap)?;

    // U and cap membership at every sample
    let samples: Vec<(f64, bool)> = map_chunks(CloudKind::Sphere, d, settings.samples, settings.seed, |_, pts| {
        let mut scratch = Vec::new();
        pts.chunks_exact(vars)
            .map(|z| (q.modulus_sqr_with(z, &mut scratch), hermitian(z, &eta).norm_sqr() > cos2))
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let mut values: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let count = values.len();
    let k = ((omega * count as f64).ceil() as usize).clamp(1, count);
    let (_, threshold, _) = values.select_nth_unstable_by(count - k, f64::total_cmp);
    let threshold = *threshold;
    let mut acc = MeanAccumulator::new();
    for &(u, in_cap) in &samples {
        let ind = f64::from(u8::from(u > threshold)) - f64::from(u8::from(in_cap));
        acc.push((u - threshold) * ind);
    }
    let binom = binomial_f64(n + d, d);
    let value = (cap_value + binom * acc.mean()).clamp(0.0, 1.0);
    Ok(OptimalConcentration {
        estimate: Estimate::with_stderr(value, binom * acc.stderr()),
        threshold,
        method: Method::CapControlVariate {
            samples: settings.samples,
            seed: settings.seed,
        },
        argmax: eta,
    })
}

/// Relative concentration deficit `1 - C / C*(omega)` against the extremal value.
pub fn relative_concentration_deficit(c: &Estimate, n: usize, d: usize, omega: f64) -> Result<Estimate> {
    let best = extremal_concentration(n, d, omega)?;
    Ok(Estimate {
        value: 1.0 - c.value / best,
        stderr: c.stderr.map(|s| s / best),
    })
}

/// Concentration on a resolved region by Monte Carlo (used for random test regions).
pub fn concentration_mc(q: &HomPoly, region: &ResolvedRegion, settings: &Settings) -> Result<Estimate> {
    let binom = binomial_f64(q.degree() + q.dim(), q.dim());
    let est = mc_mean(CloudKind::Sphere, q.dim(), settings.samples, settings.seed, Vec::new, |s, z| {
        if region.contains(z, s) {
            q.modulus_sqr_with(z, s)
        } else {
            0.0
        }
    })?;
    Ok(est.scale(binom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyspace::{random_unitary, reproducing_kernel};
    use crate::rng::{substream, Purpose};

    fn pole(d: usize) -> Vec<Complex64> {
        let mut e = vec![Complex64::new(0.0, 0.0); d + 1];
        e[0] = Complex64::new(1.0, 0.0);
        e
    }

    #[test]
    fn extremal_cap_concentration_closed_form() {
        for d in 1..=3 {
            for n in 1..=6 {
                let q = HomPoly::coordinate_power(d, n, 0).unwrap();
                for &w in &[0.1, 0.5, 0.8] {
                    let t = cap_level(n, d, w).unwrap();
                    let c = cap_concentration(&q, &pole(d), t).unwrap();
                    assert!((c - extremal_concentration(n, d, w).unwrap()).abs() < 1e-13);
                }
            }
        }
        // d = 1, N = 1, omega = 1/2 gives 3/4
        let q = HomPoly::coordinate_power(1, 1, 0).unwrap();
        let c = cap_concentration(&q, &pole(1), cap_level(1, 1, 0.5).unwrap()).unwrap();
        assert!((c - 0.75).abs() < 1e-15);
    }

    #[test]
    fn cap_concentration_matches_monte_carlo() {
        let mut rng = substream(21, Purpose::Polynomials, 0);
        let q = HomPoly::random_unit(2, 3, &mut rng).unwrap();
        let eta: Vec<Complex64> = random_unitary(3, &mut rng).column(0).iter().copied().collect();
        let region = RegionSpec::cap_with_measure(eta.clone(), 3, 0.3).unwrap();
        let exact = concentration(&q, &region, &Settings::default()).unwrap().estimate;
        let resolved = region.resolve(3, 2, &Settings::default()).unwrap();
        let mc = concentration_mc(&q, &resolved, &Settings::default().with_samples(400_000)).unwrap();
        assert!((exact.value - mc.value).abs() < 4.0 * mc.err(), "{} vs {mc}", exact.value);
    }

    #[test]
    fn kernel_optimal_concentration_is_extremal() {
        let s = 0.5f64.sqrt();
        let k = reproducing_kernel(1, 4, &[Complex64::new(s, 0.0), Complex64::new(0.0, s)]).unwrap();
        let r = optimal_concentration(&k, 0.2, &Settings::default()).unwrap();
        let want = extremal_concentration(4, 1, 0.2).unwrap();
        assert!((r.estimate.value - want).abs() < 1e-6 + 4.0 * r.estimate.err());
    }
}
