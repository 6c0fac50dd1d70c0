use crate::polyspace::incomplete_beta_int;
use crate::{Error, Result};

/// Distribution function of `|zeta_1^N|^2`: `mu_0(t) = (1 - t^{1/N})^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremalProfile {
    pub n: usize,
    pub d: usize,
}

fn beta_int(a: usize, b: usize) -> f64 {
    // B(a, b) = (a-1)!(b-1)!/(a+b-1)! for positive integers
    let mut v = 1.0;
    for k in 1..a {
        v *= k as f64 / (b + k) as f64;
    }
    v / b as f64
}

impl ExtremalProfile {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::Domain("extremal profile needs N >= 1 and d >= 1".into()));
        }
        Ok(Self { n, d })
    }

    pub fn mu(&self, t: f64) -> f64 {
        if t <= 0.0 {
            1.0
        } else if t >= 1.0 {
            0.0
        } else {
            (1.0 - t.powf(1.0 / self.n as f64)).powi(self.d as i32)
        }
    }

    pub fn mu_inverse(&self, s: f64) -> f64 {
        if s <= 0.0 {
            1.0
        } else if s >= 1.0 {
            0.0
        } else {
            (1.0 - s.powf(1.0 / self.d as f64)).powi(self.n as i32)
        }
    }

    /// `int_0^t mu_0(tau) d tau = N B(N, d+1) I_{t^{1/N}}(N, d+1)`.
    pub fn integral_mu(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let u = t.powf(1.0 / self.n as f64);
        self.n as f64 * beta_int(self.n, self.d + 1) * incomplete_beta_int(u, self.n, self.d + 1)
    }

    /// `int_0^s mu_0^{-1}(r) dr = d B(d, N+1) I_{s^{1/d}}(d, N+1)`.
    pub fn integral_mu_inverse(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        let u = s.powf(1.0 / self.d as f64);
        self.d as f64 * beta_int(self.d, self.n + 1) * incomplete_beta_int(u, self.d, self.n + 1)
    }

    /// Right-hand side of the extremal differential equation,
    /// `-(d/(N t)) m^{1-1/d}(1 - m^{1/d})` evaluated at `m`.
    pub fn ode_rhs(&self, t: f64, m: f64) -> f64 {
        let df = self.d as f64;
        let m = m.clamp(0.0, 1.0);
        -(df / (self.n as f64 * t)) * m.powf(1.0 - 1.0 / df) * (1.0 - m.powf(1.0 / df))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyspace::binomial_f64;
    use crate::quadrature::integrate_adaptive;

    #[test]
    fn inverse_pair_and_integrals() {
        for d in 1..=3 {
            for n in 1..=6 {
                let p = ExtremalProfile::new(n, d).unwrap();
                for &s in &[0.1, 0.5, 0.9] {
                    assert!((p.mu(p.mu_inverse(s)) - s).abs() < 1e-13);
                }
                // full integral equals the mass 1/binom(N+d, d)
                let mass = 1.0 / binomial_f64(n + d, d);
                assert!((p.integral_mu(1.0) - mass).abs() < 1e-15);
                assert!((p.integral_mu_inverse(1.0) - mass).abs() < 1e-15);
                let num = integrate_adaptive(|t| p.mu(t), 0.0, 0.37, 1e-13, 0.0).unwrap().value;
                assert!((p.integral_mu(0.37) - num).abs() < 1e-12);
                let num = integrate_adaptive(|s| p.mu_inverse(s), 0.0, 0.21, 1e-13, 0.0).unwrap().value;
                assert!((p.integral_mu_inverse(0.21) - num).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn extremal_profile_saturates_the_ode() {
        let p = ExtremalProfile::new(5, 2).unwrap();
        let t: f64 = 0.3;
        let h = 1e-6;
        let slope = (p.mu(t + h) - p.mu(t - h)) / (2.0 * h);
        assert!((slope - p.ode_rhs(t, p.mu(t))).abs() < 1e-7);
    }
}
