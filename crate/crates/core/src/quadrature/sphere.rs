use super::gauss::gauss_jacobi;
use crate::polyspace::SpherePoint;
use crate::{Complex64, Error, Result};
use rayon::prelude::*;
use std::f64::consts::TAU;

const BLOCK: usize = 2048;

/// Product rule for the normalized surface measure on the unit sphere of `C^{d+1}`.
///
/// Points are parametrized by stick-breaking of the squared moduli
/// (`|zeta_1|^2 = v_1`, `|zeta_2|^2 = v_2 (1 - v_1)`, ...), where `v_j` has density
/// proportional to `(1 - v)^{d-j}` and is discretized by Gauss–Jacobi, times
/// uniform phase grids for `theta_2, ..., theta_{d+1}`. The first phase is fixed
/// at zero, so the rule integrates functions invariant under the global phase
/// `zeta -> e^{i phi} zeta` (such as `|Q|^2`, `Phi(|Q|^2)` and `zeta^alpha conj(zeta)^beta`
/// with `|alpha| = |beta|`).
#[derive(Debug, Clone)]
pub struct SphereRule {
    d: usize,
    degree: usize,
    radial: Vec<(Vec<f64>, Vec<f64>)>,
    angular: usize,
    points: Vec<Complex64>,
    weights: Vec<f64>,
}

impl SphereRule {
    /// Smallest rule of this family that is exact for `zeta^alpha conj(zeta)^beta`,
    /// `|alpha| = |beta| <= n_max`: `ceil((n_max + 1) / 2)` radial nodes per
    /// factor and `n_max + 1` phases per angle.
    pub fn new(d: usize, n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Domain("rule degree must be at least 1".into()));
        }
        let mut rule = Self::with_sizes(d, (n_max + 2) / 2, n_max + 1)?;
        rule.degree = n_max;
        Ok(rule)
    }

    /// Rule with `radial` Gauss–Jacobi nodes per factor and `angular` phases per angle.
    pub fn with_sizes(d: usize, radial: usize, angular: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("sphere dimension d must be at least 1".into()));
        }
        if radial == 0 || angular == 0 {
            return Err(Error::Domain("rule sizes must be positive".into()));
        }
        let total = radial
            .checked_pow(d as u32)
            .and_then(|r| angular.checked_pow(d as u32).and_then(|a| r.checked_mul(a)))
            .filter(|&t| t.saturating_mul((d + 1) * 16) <= 1 << 31)
            .ok_or_else(|| Error::Size(format!("sphere rule with {radial}^{d} x {angular}^{d} nodes")))?;
        let factors: Vec<(Vec<f64>, Vec<f64>)> = (1..=d)
            .map(|j| {
                let (x, w) = gauss_jacobi(radial, (d - j) as f64, 0.0)?;
                Ok((x.iter().map(|t| 0.5 * (1.0 + t)).collect(), w))
            })
            .collect::<Result<_>>()?;
        let phases: Vec<Complex64> = (0..angular)
            .map(|m| Complex64::from_polar(1.0, TAU * m as f64 / angular as f64))
            .collect();

        let vars = d + 1;
        let mut points = Vec::with_capacity(total * vars);
        let mut weights = Vec::with_capacity(total);
        let mut ridx = vec![0usize; d];
        let mut moduli = vec![0.0f64; vars];
        let ang_total = angular.pow(d as u32);
        let ang_w = 1.0 / ang_total as f64;
        loop {
            let mut remaining = 1.0;
            let mut w_rad = 1.0;
            for j in 0..d {
                let v = factors[j].0[ridx[j]];
                w_rad *= factors[j].1[ridx[j]];
                moduli[j] = (v * remaining).max(0.0).sqrt();
                remaining *= 1.0 - v;
            }
            moduli[d] = remaining.max(0.0).sqrt();
            for a in 0..ang_total {
                let mut code = a;
                points.push(Complex64::new(moduli[0], 0.0));
                for m in &moduli[1..] {
                    points.push(phases[code % angular] * m);
                    code /= angular;
                }
                weights.push(w_rad * ang_w);
            }
            // advance the radial odometer
            let mut pos = 0;
            loop {
                if pos == d {
                    let sum: f64 = weights.iter().sum();
                    weights.iter_mut().for_each(|w| *w /= sum);
                    return Ok(Self {
                        d,
                        degree: 2 * radial - 1,
                        radial: factors,
                        angular,
                        points,
                        weights,
                    });
                }
                ridx[pos] += 1;
                if ridx[pos] < radial {
                    break;
                }
                ridx[pos] = 0;
                pos += 1;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Largest `n` such that `zeta^alpha conj(zeta)^beta` with `|alpha| = |beta| <= n` is integrated exactly.
    pub fn degree(&self) -> usize {
        self.degree.min(self.angular - 1)
    }

    /// Per-factor radial nodes (mapped to `[0, 1]`) and weights.
    pub fn radial(&self) -> &[(Vec<f64>, Vec<f64>)] {
        &self.radial
    }

    pub fn angular_size(&self) -> usize {
        self.angular
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[Complex64] {
        let v = self.d + 1;
        &self.points[i * v..(i + 1) * v]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sphere_point(&self, i: usize) -> SpherePoint {
        SpherePoint::new(self.node(i).to_vec()).expect("rule nodes lie on the sphere")
    }

    /// Evaluates `f` at every node (in node order) with per-block scratch state.
    pub fn map_nodes<S, T, I, F>(&self, init: I, f: F) -> Vec<T>
    where
        T: Send,
        I: Fn() -> S + Sync,
        F: Fn(&mut S, &[Complex64]) -> T + Sync,
    {
        let v = self.d + 1;
        let blocks: Vec<Vec<T>> = self
            .points
            .par_chunks(BLOCK * v)
            .map(|chunk| {
                let mut state = init();
                chunk.chunks_exact(v).map(|z| f(&mut state, z)).collect()
            })
            .collect();
        blocks.into_iter().flatten().collect()
    }

    /// `∫ f dσ` with per-block scratch state; summation order is fixed.
    pub fn integrate_with<S, I, F>(&self, init: I, f: F) -> Result<f64>
    where
        I: Fn() -> S + Sync,
        F: Fn(&mut S, &[Complex64]) -> f64 + Sync,
    {
        let v = self.d + 1;
        let partials: Vec<std::result::Result<f64, usize>> = self
            .points
            .par_chunks(BLOCK * v)
            .zip(self.weights.par_chunks(BLOCK))
            .enumerate()
            .map(|(b, (chunk, w))| {
                let mut state = init();
                let mut acc = 0.0;
                for (i, (z, wi)) in chunk.chunks_exact(v).zip(w).enumerate() {
                    let val = f(&mut state, z);
                    if !val.is_finite() {
                        return Err(b * BLOCK + i);
                    }
                    acc += wi * val;
                }
                Ok(acc)
            })
            .collect();
        let mut total = 0.0;
        for p in partials {
            match p {
                Ok(x) => total += x,
                Err(node) => {
                    return Err(Error::Evaluation {
                        node,
                        message: format!("integrand is not finite at {:?}", self.node(node)),
                    })
                }
            }
        }
        Ok(total)
    }

    pub fn integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&[Complex64]) -> f64 + Sync,
    {
        self.integrate_with(|| (), |_, z| f(z))
    }

    pub fn integrate_complex<F>(&self, f: F) -> Result<Complex64>
    where
        F: Fn(&[Complex64]) -> Complex64 + Sync,
    {
        let re = self.integrate(|z| f(z).re)?;
        let im = self.integrate(|z| f(z).im)?;
        Ok(Complex64::new(re, im))
    }
}

/// Exact sphere rule for bidegree `(n_max, n_max)` phase-invariant integrands.
pub fn build_sphere_rule(d: usize, n_max: usize) -> Result<SphereRule> {
    SphereRule::new(d, n_max)
}

/// `∫ f dσ` over the rule's nodes.
pub fn integrate_sphere<F>(f: F, rule: &SphereRule) -> Result<f64>
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    rule.integrate(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyspace::binomial_f64;

    #[test]
    fn total_mass_and_moments() {
        for d in 1..=3 {
            for n in 1..=6 {
                let rule = SphereRule::new(d, n).unwrap();
                let one = rule.integrate(|_| 1.0).unwrap();
                assert!((one - 1.0).abs() < 1e-13);
                assert!(rule.weights().iter().all(|&w| w > 0.0));
                let m = rule.integrate(|z| z[0].norm_sqr().powi(n as i32)).unwrap();
                assert!((m - 1.0 / binomial_f64(n + d, d)).abs() < 1e-14, "d={d} n={n}");
                let cross = rule.integrate_complex(|z| z[0] * z[1].conj()).unwrap();
                assert!(cross.norm() < 1e-15);
            }
        }
    }

    #[test]
    fn nan_names_the_node() {
        let rule = SphereRule::new(1, 2).unwrap();
        let err = rule.integrate(|z| if z[0].re < 0.5 { f64::NAN } else { 1.0 }).unwrap_err();
        assert!(matches!(err, Error::Evaluation { .. }));
    }
}
