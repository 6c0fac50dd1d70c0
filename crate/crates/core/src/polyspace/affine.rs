use super::hompoly::{monomial_value, HomPoly};
use super::multiindex::Basis;
use crate::{Complex64, Error, Result};

/// Polynomial of degree at most `N` in `d` complex variables, identified with
/// its homogenization. Terms are indexed by the affine exponent
/// `(alpha_2, ..., alpha_{d+1})`, the dropped first exponent being `N - |alpha|`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePoly {
    hom: HomPoly,
}

impl AffinePoly {
    pub fn from_homogeneous(hom: HomPoly) -> Self {
        Self { hom }
    }

    /// Sparse constructor from affine exponents of length `d` and `|alpha| <= n`.
    pub fn from_terms<I>(d: usize, n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Complex64)>,
    {
        let basis = Basis::shared(d, n)?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); basis.len()];
        let mut full = vec![0u32; d + 1];
        for (alpha, c) in terms {
            let total: usize = alpha.iter().map(|&a| a as usize).sum();
            if alpha.len() != d || total > n {
                return Err(Error::Shape(format!(
                    "affine exponent {alpha:?} invalid for d={d}, N={n}"
                )));
            }
            full[0] = (n - total) as u32;
            full[1..].copy_from_slice(&alpha);
            let slot = basis.rank(&full).expect("valid exponent");
            coeffs[slot] += c;
        }
        Ok(Self {
            hom: HomPoly::with_basis(basis, coeffs)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.hom.dim()
    }

    pub fn degree(&self) -> usize {
        self.hom.degree()
    }

    pub fn homogenize(&self) -> HomPoly {
        self.hom.clone()
    }

    pub fn as_homogeneous(&self) -> &HomPoly {
        &self.hom
    }

    /// Iterates `(affine exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Complex64)> + '_ {
        self.hom.terms().map(|(a, c)| (&a[1..], c))
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dim() {
            return Err(Error::Shape(format!(
                "point has {} components, expected {}",
                z.len(),
                self.dim()
            )));
        }
        Ok(self
            .terms()
            .map(|(alpha, c)| c * monomial_value(alpha, z))
            .sum())
    }

    /// Norm inherited from the homogenization (Bombieri norm).
    pub fn norm(&self) -> f64 {
        self.hom.norm()
    }

    pub fn inner(&self, other: &AffinePoly) -> Result<Complex64> {
        self.hom.bombieri_inner(&other.hom)
    }
}

impl HomPoly {
    /// Homogenization `Q(zeta) = zeta_1^N q(zeta_2/zeta_1, ...)` of an affine polynomial.
    pub fn from_affine(q: &AffinePoly) -> HomPoly {
        q.homogenize()
    }
}

/// Affine kernel `k_N(z, w) = (1 + z . conj(w))^N` as a polynomial in `z`.
pub fn affine_kernel(n: usize, w: &[Complex64]) -> Result<AffinePoly> {
    let d = w.len();
    let mut eta = Vec::with_capacity(d + 1);
    eta.push(Complex64::new(1.0, 0.0));
    eta.extend_from_slice(w);
    let basis = Basis::shared(d, n)?;
    let conj: Vec<Complex64> = eta.iter().map(|c| c.conj()).collect();
    let coeffs = (0..basis.len())
        .map(|i| monomial_value(basis.exponents(i), &conj) / basis.weight(i))
        .collect();
    Ok(AffinePoly::from_homogeneous(HomPoly::with_basis(basis, coeffs)?))
}

/// Unit-norm affine kernel `k_N(., w) / (1 + |w|^2)^{N/2}`.
pub fn normalized_affine_kernel(n: usize, w: &[Complex64]) -> Result<AffinePoly> {
    let k = affine_kernel(n, w)?;
    let w2: f64 = w.iter().map(|c| c.norm_sqr()).sum();
    let scale = (1.0 + w2).powf(-(n as f64) / 2.0);
    Ok(AffinePoly::from_homogeneous(
        k.hom.scale(Complex64::new(scale, 0.0)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Purpose};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dehomogenize_round_trip() {
        let mut rng = substream(4, Purpose::Polynomials, 0);
        let q = HomPoly::random_unit(2, 4, &mut rng).unwrap();
        let a = q.to_affine();
        assert_eq!(HomPoly::from_affine(&a), q);
        let z = [c(0.3, -0.1), c(-0.7, 0.4)];
        let direct = q.eval(&[c(1.0, 0.0), z[0], z[1]]).unwrap();
        assert!((a.eval(&z).unwrap() - direct).norm() < 1e-14);
    }

    #[test]
    fn affine_kernel_values() {
        let w = [c(0.4, 0.2), c(-0.1, 0.3)];
        let k = affine_kernel(5, &w).unwrap();
        let z = [c(0.2, 0.1), c(0.5, -0.6)];
        let dot = c(1.0, 0.0) + z[0] * w[0].conj() + z[1] * w[1].conj();
        assert!((k.eval(&z).unwrap() - dot.powu(5)).norm() < 1e-13);
        let nk = normalized_affine_kernel(5, &w).unwrap();
        assert!((nk.norm() - 1.0).abs() < 1e-13);
    }
}
