use super::extremal::ExtremalProfile;
use crate::estimate::{Estimate, MeanAccumulator};
use crate::polyspace::HomPoly;
use crate::quadrature::{map_chunks, CloudKind};
use crate::{Error, Result};

/// Empirical distribution function of `U = |Q|^2` under the sphere measure,
/// stored as the sorted sample of `U`.
#[derive(Debug, Clone)]
pub struct LevelProfile {
    values: Vec<f64>,
    t_sup: f64,
    n: usize,
    d: usize,
    seed: u64,
}

impl LevelProfile {
    /// Samples `U` at `count` seeded uniform sphere points. `t_sup` is the
    /// supremum of `U` when known (otherwise the sample maximum is used).
    pub fn sample(q: &HomPoly, count: usize, seed: u64, t_sup: Option<f64>) -> Result<Self> {
        if count == 0 {
            return Err(Error::Domain("a level profile needs at least one sample".into()));
        }
        let vars = q.vars();
        let values: Vec<f64> = map_chunks(CloudKind::Sphere, q.dim(), count, seed, |_, pts| {
            let mut scratch = Vec::new();
            pts.chunks_exact(vars)
                .map(|z| q.modulus_sqr_with(z, &mut scratch))
                .collect::<Vec<f64>>()
        })
        .into_iter()
        .flatten()
        .collect();
        Self::from_values(values, q.degree(), q.dim(), t_sup, seed)
    }

    pub fn from_values(mut values: Vec<f64>, n: usize, d: usize, t_sup: Option<f64>, seed: u64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("a level profile needs at least one sample".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Evaluation {
                node: i,
                message: "non-finite sample of |Q|^2".into(),
            });
        }
        values.sort_by(f64::total_cmp);
        let top = *values.last().expect("nonempty");
        let t_sup = t_sup.map_or(top, |t| t.max(top));
        Ok(Self {
            values,
            t_sup,
            n,
            d,
            seed,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Supremum `T` of `U`.
    pub fn t_sup(&self) -> f64 {
        self.t_sup
    }

    /// Sorted (ascending) samples.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn extremal(&self) -> ExtremalProfile {
        ExtremalProfile {
            n: self.n,
            d: self.d,
        }
    }

    /// Number of samples with `U > t`.
    pub fn count_above(&self, t: f64) -> usize {
        self.values.len() - self.values.partition_point(|&v| v <= t)
    }

    /// Empirical `mu(t) = sigma(U > t)`.
    pub fn mu(&self, t: f64) -> f64 {
        self.count_above(t) as f64 / self.values.len() as f64
    }

    /// Binomial standard error of `mu(t)`.
    pub fn mu_stderr(&self, t: f64) -> f64 {
        let m = self.mu(t);
        (m * (1.0 - m) / self.values.len() as f64).sqrt()
    }

    /// Order statistic of rank `ceil(s n)` counted from the top.
    pub fn mu_inverse(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::Domain(format!("mu_inverse needs s in (0, 1), got {s}")));
        }
        Ok(self.mu_inverse_unchecked(s))
    }

    pub(crate) fn mu_inverse_unchecked(&self, s: f64) -> f64 {
        let n = self.values.len();
        let k = ((s * n as f64).ceil() as usize).clamp(1, n);
        self.values[n - k]
    }

    /// `int_0^t mu(tau) d tau = E[min(U, t)]`, integrated exactly on the step function.
    pub fn integral_mu(&self, t: f64) -> Estimate {
        let mut acc = MeanAccumulator::new();
        self.values.iter().for_each(|&v| acc.push(v.min(t)));
        acc.estimate()
    }

    /// `int_0^s mu^{-1}(r) dr = E[(U - t_s)_+] + s t_s` with `t_s = mu^{-1}(s)`,
    /// integrated exactly on the step function.
    pub fn integral_mu_inverse(&self, s: f64) -> Estimate {
        let n = self.values.len();
        let s = s.clamp(0.0, 1.0);
        let k = (s * n as f64).floor() as usize;
        let desc = |i: usize| self.values[n - 1 - i];
        let mut total: f64 = (0..k.min(n)).map(desc).sum::<f64>() / n as f64;
        if k < n {
            total += (s - k as f64 / n as f64) * desc(k);
        }
        // influence function of the functional: (U - t_s)_+ (first order in t_s cancels)
        let ts = if s > 0.0 && s < 1.0 { self.mu_inverse_unchecked(s) } else if s >= 1.0 { 0.0 } else { self.t_sup };
        let mut acc = MeanAccumulator::new();
        self.values.iter().for_each(|&v| acc.push((v - ts).max(0.0)));
        Estimate::with_stderr(total, acc.stderr())
    }

    /// Profile export on a uniform `points`-point grid over `[0, T]`:
    /// rows of `(t, mu, mu_0, mu - mu_0)`.
    pub fn export_rows(&self, points: usize) -> Vec<[f64; 4]> {
        let ext = self.extremal();
        let m = points.max(2);
        (0..m)
            .map(|i| {
                let t = self.t_sup * i as f64 / (m - 1) as f64;
                let a = self.mu(t);
                let b = ext.mu(t);
                [t, a, b, a - b]
            })
            .collect()
    }

    /// `sup_t |mu(t) - mu_0(t)|` over the sample points (Kolmogorov–Smirnov distance).
    pub fn sup_distance_to_extremal(&self) -> f64 {
        let ext = self.extremal();
        let n = self.values.len() as f64;
        let mut worst: f64 = 0.0;
        for (i, &v) in self.values.iter().enumerate() {
            // just below and at v, mu takes the values (n - i)/n and (n - i - 1)/n
            let m0 = ext.mu(v);
            let above = (self.values.len() - i) as f64 / n;
            let at = (self.values.len() - i - 1) as f64 / n;
            worst = worst.max((above - m0).abs()).max((at - m0).abs());
        }
        worst
    }
}

/// Writes the export rows as CSV with header `t,mu_empirical,mu0,diff`.
pub fn write_profile_csv<W: std::io::Write>(profile: &LevelProfile, points: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "mu_empirical", "mu0", "diff"])?;
    for row in profile.export_rows(points) {
        w.write_record(row.iter().map(|v| format!("{v:.12e}")))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_function_identities() {
        let p = LevelProfile::from_values(vec![0.1, 0.4, 0.2, 0.3], 1, 1, None, 0).unwrap();
        assert_eq!(p.mu(0.0), 1.0);
        assert_eq!(p.mu(0.25), 0.5);
        assert_eq!(p.mu(0.4), 0.0);
        assert_eq!(p.mu_inverse(0.5).unwrap(), 0.3);
        assert_eq!(p.mu_inverse(0.26).unwrap(), 0.3);
        assert_eq!(p.mu_inverse(0.25).unwrap(), 0.4);
        assert!(p.mu_inverse(1.0).is_err());
        // both integrals equal the sample mean on the full range
        assert!((p.integral_mu(1.0).value - 0.25).abs() < 1e-15);
        assert!((p.integral_mu_inverse(1.0).value - 0.25).abs() < 1e-15);
        assert!((p.integral_mu_inverse(0.5).value - 0.175).abs() < 1e-15);
    }
}
