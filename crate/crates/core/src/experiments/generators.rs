use super::config::{Generator, SweepConfig};
use crate::polyspace::{normalize, read_poly, reproducing_kernel, AffinePoly, HomPoly};
use crate::rng::{substream, Purpose};
use crate::{Complex64, Error, Result};
use rand::Rng;
use rand_distr::StandardNormal;

/// One polynomial of a sweep.
#[derive(Debug, Clone)]
pub struct Sample {
    pub index: usize,
    pub q: HomPoly,
    /// Perturbation size for near-kernel and sharpness samples.
    pub eps: Option<f64>,
}

/// Seed-derived stream index of item `i` at degree `n`.
pub fn item_stream(n: usize, i: usize) -> u64 {
    ((n as u64) << 32) | i as u64
}

pub fn random_center<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let z: Vec<Complex64> = (0..=d)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Ok(z) = normalize(&z) {
            return z;
        }
    }
}

/// `(K_eta + eps X) / sqrt(1 + eps^2)` with `X` a random unit polynomial orthogonal to `K_eta`.
pub fn near_kernel<R: Rng + ?Sized>(d: usize, n: usize, eps: f64, rng: &mut R) -> Result<HomPoly> {
    let eta = random_center(d, rng);
    let k = reproducing_kernel(d, n, &eta)?;
    if k.basis().len() == 1 {
        return Ok(k);
    }
    loop {
        let x = HomPoly::random_unit(d, n, rng)?;
        let x = &x - &(&k * x.bombieri_inner(&k)?);
        if x.norm() > 1e-8 {
            let x = x.normalized()?;
            return (&k + &(&x * Complex64::new(eps, 0.0))).normalized();
        }
    }
}

/// `(zeta_1^N + eps zeta_1^{N-1} zeta_2) / sqrt(1 + eps^2/N)`, the homogenization of `1 + eps z_1`.
pub fn sharpness_polynomial(d: usize, n: usize, eps: f64) -> Result<HomPoly> {
    let mut e1 = vec![0u32; d];
    e1[0] = 1;
    let one = (vec![0u32; d], Complex64::new(1.0, 0.0));
    let q = AffinePoly::from_terms(d, n, [one, (e1, Complex64::new(eps, 0.0))])?;
    let h = q.homogenize();
    let norm = (1.0 + eps * eps / n as f64).sqrt();
    Ok(h.scale(Complex64::new(1.0 / norm, 0.0)))
}

/// Log-spaced `eps_i` in `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// The polynomials of a sweep at degree `n`, each drawn from its own substream.
pub fn generate(config: &SweepConfig, n: usize) -> Result<Vec<Sample>> {
    let d = config.d;
    let stream = |i: usize| substream(config.seed, Purpose::Polynomials, item_stream(n, i));
    match &config.generator {
        Generator::Random => (0..config.count)
            .map(|i| {
                Ok(Sample {
                    index: i,
                    q: HomPoly::random_unit(d, n, &mut stream(i))?,
                    eps: None,
                })
            })
            .collect(),
        Generator::Kernel => (0..config.count)
            .map(|i| {
                let eta = random_center(d, &mut stream(i));
                Ok(Sample {
                    index: i,
                    q: reproducing_kernel(d, n, &eta)?,
                    eps: Some(0.0),
                })
            })
            .collect(),
        Generator::NearKernel { eps_min, eps_max } => log_spaced(*eps_min, *eps_max, config.count)
            .into_iter()
            .enumerate()
            .map(|(i, eps)| {
                Ok(Sample {
                    index: i,
                    q: near_kernel(d, n, eps, &mut stream(i))?,
                    eps: Some(eps),
                })
            })
            .collect(),
        Generator::Sharpness { eps } => eps
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                Ok(Sample {
                    index: i,
                    q: sharpness_polynomial(d, n, e)?,
                    eps: Some(e),
                })
            })
            .collect(),
        Generator::Files { paths } => paths
            .iter()
            .enumerate()
            .filter_map(|(i, p)| match read_poly(p) {
                Ok(q) if q.degree() == n => Some(q.normalized().map(|q| Sample { index: i, q, eps: None })),
                Ok(q) if q.dim() != d => Some(Err(Error::Config(format!(
                    "{}: polynomial has d = {}, config has d = {d}",
                    p.display(),
                    q.dim()
                )))),
                Ok(_) => None,
                Err(e) => Some(Err(e)),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sharpness_polynomial_has_unit_norm() {
        for &eps in &[0.0, 0.1, 0.7] {
            let q = sharpness_polynomial(2, 6, eps).unwrap();
            assert!((q.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn near_kernel_distance_grows_with_eps() {
        let mut rng = substream(3, Purpose::Polynomials, 0);
        let q = near_kernel(2, 4, 0.1, &mut rng).unwrap();
        assert!((q.norm() - 1.0).abs() < 1e-13);
    }
}
