use crate::{Complex64, Error, Result};

/// Checks `| |z| - 1 | <= tol`.
pub fn check_unit(z: &[Complex64], tol: f64) -> Result<()> {
    let nrm = norm(z);
    if (nrm - 1.0).abs() > tol || !nrm.is_finite() {
        return Err(Error::Domain(format!("expected a unit vector, |z| = {nrm}")));
    }
    Ok(())
}

pub fn norm(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian product `sum z_k conj(w_k)`.
pub fn hermitian(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

pub fn normalize(z: &[Complex64]) -> Result<Vec<Complex64>> {
    let nrm = norm(z);
    if !(nrm > 0.0) || !nrm.is_finite() {
        return Err(Error::Domain("cannot normalize a zero vector".into()));
    }
    Ok(z.iter().map(|c| c / nrm).collect())
}

/// Point of the unit sphere in `C^{d+1}`, with its polar coordinates
/// `zeta_k = sqrt(rho_k) e^{i theta_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    ambient: Vec<Complex64>,
}

impl SpherePoint {
    pub fn new(ambient: Vec<Complex64>) -> Result<Self> {
        if ambient.len() < 2 {
            return Err(Error::Shape("sphere points need at least two components".into()));
        }
        check_unit(&ambient, 1e-12)?;
        Ok(Self { ambient })
    }

    /// Normalizes a nonzero vector onto the sphere.
    pub fn from_vector(v: &[Complex64]) -> Result<Self> {
        Self::new(normalize(v)?)
    }

    /// Builds from `rho_k` (summing to one) and phases `theta_k`.
    pub fn from_coords(rho: &[f64], theta: &[f64]) -> Result<Self> {
        if rho.len() != theta.len() {
            return Err(Error::Shape("rho and theta lengths differ".into()));
        }
        if rho.iter().any(|&r| r < 0.0) {
            return Err(Error::Domain("rho must be nonnegative".into()));
        }
        let ambient = rho
            .iter()
            .zip(theta)
            .map(|(&r, &t)| Complex64::from_polar(r.sqrt(), t))
            .collect();
        Self::new(ambient)
    }

    /// The north pole `(1, 0, ..., 0)` in `C^{d+1}`.
    pub fn pole(d: usize) -> Self {
        let mut ambient = vec![Complex64::new(0.0, 0.0); d + 1];
        ambient[0] = Complex64::new(1.0, 0.0);
        Self { ambient }
    }

    pub fn ambient(&self) -> &[Complex64] {
        &self.ambient
    }

    pub fn into_ambient(self) -> Vec<Complex64> {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.ambient.len() - 1
    }

    pub fn rho(&self) -> Vec<f64> {
        self.ambient.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn theta(&self) -> Vec<f64> {
        self.ambient.iter().map(|c| c.arg()).collect()
    }

    /// `|<self, other>|^2`, the squared cosine of the Fubini–Study distance.
    pub fn overlap(&self, other: &SpherePoint) -> f64 {
        hermitian(&self.ambient, &other.ambient).norm_sqr()
    }
}
