use super::combinatorics::compositions;
use super::multiindex::{rank_unchecked, Basis, MultiIndex};
use super::point::check_unit;
use super::rotation::check_unitary;
use crate::{Complex64, Error, Result};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Homogeneous polynomial of degree `N` in `d + 1` complex variables, stored
/// densely over the descending-lexicographic monomial basis.
#[derive(Debug, Clone)]
pub struct HomPoly {
    basis: Arc<Basis>,
    coeffs: Vec<Complex64>,
}

impl PartialEq for HomPoly {
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.degree() == other.degree() && self.coeffs == other.coeffs
    }
}

impl HomPoly {
    pub fn new(d: usize, n: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let basis = Basis::shared(d, n)?;
        Self::with_basis(basis, coeffs)
    }

    pub fn with_basis(basis: Arc<Basis>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::Shape(format!(
                "expected {} coefficients for d={}, N={}, got {}",
                basis.len(),
                basis.dim(),
                basis.degree(),
                coeffs.len()
            )));
        }
        Ok(Self { basis, coeffs })
    }

    pub fn zeros(d: usize, n: usize) -> Result<Self> {
        let basis = Basis::shared(d, n)?;
        let coeffs = vec![ZERO; basis.len()];
        Ok(Self { basis, coeffs })
    }

    /// Sparse constructor; every exponent must have length `d + 1` and sum `n`.
    pub fn from_terms<I>(d: usize, n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut p = Self::zeros(d, n)?;
        for (alpha, c) in terms {
            let slot = p.basis.rank(alpha.entries()).ok_or_else(|| {
                Error::Shape(format!("multi-index {:?} is not of degree {n} in {} variables", alpha.entries(), d + 1))
            })?;
            p.coeffs[slot] += c;
        }
        Ok(p)
    }

    /// The monomial `coeff * zeta^alpha`.
    pub fn monomial(d: usize, alpha: &[u32], coeff: Complex64) -> Result<Self> {
        let n = alpha.iter().map(|&a| a as usize).sum();
        Self::from_terms(d, n, [(MultiIndex::new(alpha.to_vec()), coeff)])
    }

    /// `zeta_k^n` (with `k` zero-based).
    pub fn coordinate_power(d: usize, n: usize, k: usize) -> Result<Self> {
        if k > d {
            return Err(Error::Shape(format!("coordinate {k} out of range for d={d}")));
        }
        let mut alpha = vec![0u32; d + 1];
        alpha[k] = n as u32;
        Self::monomial(d, &alpha, Complex64::new(1.0, 0.0))
    }

    /// Polynomial whose coordinates in the orthonormal basis
    /// `sqrt(N!/alpha!) zeta^alpha` are `onb`.
    pub fn from_onb_coords(d: usize, n: usize, onb: &[Complex64]) -> Result<Self> {
        let basis = Basis::shared(d, n)?;
        if onb.len() != basis.len() {
            return Err(Error::Shape(format!(
                "expected {} orthonormal coordinates, got {}",
                basis.len(),
                onb.len()
            )));
        }
        let coeffs = onb
            .iter()
            .zip(basis.weights())
            .map(|(c, w)| c / w.sqrt())
            .collect();
        Ok(Self { basis, coeffs })
    }

    /// Unit-norm polynomial with i.i.d. standard complex Gaussian coordinates
    /// in the orthonormal monomial basis (a unitarily invariant ensemble).
    pub fn random_unit<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Result<Self> {
        let basis = Basis::shared(d, n)?;
        let onb: Vec<Complex64> = (0..basis.len())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let p = Self::from_onb_coords(d, n, &onb)?;
        p.normalized()
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn vars(&self) -> usize {
        self.basis.vars()
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &[u32]) -> Option<Complex64> {
        self.basis.rank(alpha).map(|i| self.coeffs[i])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Complex64)> + '_ {
        self.basis.iter().zip(self.coeffs.iter().copied())
    }

    /// Coordinates in the orthonormal basis `sqrt(N!/alpha!) zeta^alpha`.
    pub fn onb_coords(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .zip(self.basis.weights())
            .map(|(a, w)| a * w.sqrt())
            .collect()
    }

    fn check_same_space(&self, other: &HomPoly) -> Result<()> {
        if self.dim() != other.dim() || self.degree() != other.degree() {
            return Err(Error::Shape(format!(
                "(d, N) = ({}, {}) vs ({}, {})",
                self.dim(),
                self.degree(),
                other.dim(),
                other.degree()
            )));
        }
        Ok(())
    }

    /// Bombieri inner product `sum_alpha (alpha!/N!) a_alpha conj(b_alpha)`.
    pub fn bombieri_inner(&self, other: &HomPoly) -> Result<Complex64> {
        self.check_same_space(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .zip(self.basis.weights())
            .map(|((a, b), w)| a * b.conj() * w)
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(self.basis.weights())
            .map(|(a, w)| a.norm_sqr() * w)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let nrm = self.norm();
        if !(nrm > 0.0) || !nrm.is_finite() {
            return Err(Error::Domain("cannot normalize the zero polynomial".into()));
        }
        Ok(self.scale(Complex64::new(1.0 / nrm, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Linear combination `self + c * other`.
    pub fn axpy(&self, c: Complex64, other: &HomPoly) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self {
            basis: self.basis.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + c * b)
                .collect(),
        })
    }

    /// Evaluates at an arbitrary vector of `d + 1` complex numbers.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.vars() {
            return Err(Error::Shape(format!(
                "point has {} components, polynomial has {} variables",
                z.len(),
                self.vars()
            )));
        }
        let mut scratch = Vec::new();
        Ok(self.eval_with(z, &mut scratch))
    }

    /// Evaluation reusing a caller-owned power table; `z` must have `d + 1` entries.
    pub fn eval_with(&self, z: &[Complex64], pows: &mut Vec<Complex64>) -> Complex64 {
        let n = self.degree();
        let vars = self.vars();
        debug_assert_eq!(z.len(), vars);
        let stride = n + 1;
        pows.clear();
        pows.resize(vars * stride, ZERO);
        for (k, &zk) in z.iter().enumerate() {
            let row = &mut pows[k * stride..(k + 1) * stride];
            row[0] = Complex64::new(1.0, 0.0);
            for e in 1..=n {
                row[e] = row[e - 1] * zk;
            }
        }
        nested_sum(&self.coeffs, pows, stride, 0, vars, n)
    }

    /// `|Q(z)|^2`.
    pub fn modulus_sqr_with(&self, z: &[Complex64], pows: &mut Vec<Complex64>) -> f64 {
        self.eval_with(z, pows).norm_sqr()
    }

    /// Partial derivative with respect to variable `k` (zero-based).
    pub fn derivative(&self, k: usize) -> Result<Self> {
        let n = self.degree();
        if n == 0 {
            return Err(Error::Domain("derivative of a degree-0 polynomial".into()));
        }
        if k >= self.vars() {
            return Err(Error::Shape(format!("variable {k} out of range")));
        }
        let target = Basis::shared(self.dim(), n - 1)?;
        let mut coeffs = vec![ZERO; target.len()];
        let mut buf = vec![0u32; self.vars()];
        for (alpha, c) in self.terms() {
            if alpha[k] == 0 || c == ZERO {
                continue;
            }
            buf.copy_from_slice(alpha);
            buf[k] -= 1;
            coeffs[rank_unchecked(&buf, n - 1)] += c * alpha[k] as f64;
        }
        Ok(Self {
            basis: target,
            coeffs,
        })
    }

    /// Product of homogeneous polynomials (degrees add).
    pub fn mul_poly(&self, other: &HomPoly) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Shape("dimension mismatch in product".into()));
        }
        let n = self.degree() + other.degree();
        let target = Basis::shared(self.dim(), n)?;
        let table = RankTable::new(self.vars(), n);
        let mut coeffs = vec![ZERO; target.len()];
        let mut buf = vec![0u32; self.vars()];
        for (a, ca) in self.terms() {
            if ca == ZERO {
                continue;
            }
            for (b, cb) in other.terms() {
                if cb == ZERO {
                    continue;
                }
                for ((o, x), y) in buf.iter_mut().zip(a).zip(b) {
                    *o = x + y;
                }
                coeffs[table.rank(&buf)] += ca * cb;
            }
        }
        Ok(Self {
            basis: target,
            coeffs,
        })
    }

    /// Action of a unitary `R`: `zeta -> Q(R^{-1} zeta)`, expanded exactly by
    /// substituting linear forms.
    pub fn rotate(&self, r: &DMatrix<Complex64>) -> Result<Self> {
        let vars = self.vars();
        if r.nrows() != vars || r.ncols() != vars {
            return Err(Error::Shape(format!(
                "rotation must be {vars}x{vars}, got {}x{}",
                r.nrows(),
                r.ncols()
            )));
        }
        check_unitary(r, 1e-12)?;
        let d = self.dim();
        let n = self.degree();
        // (R^* zeta)_k = sum_j conj(R_jk) zeta_j
        let forms: Vec<HomPoly> = (0..vars)
            .map(|k| {
                let coeffs = (0..vars).map(|j| r[(j, k)].conj()).collect();
                HomPoly::new(d, 1, coeffs)
            })
            .collect::<Result<_>>()?;
        let mut powers: Vec<Vec<HomPoly>> = Vec::with_capacity(vars);
        for form in &forms {
            let mut row = vec![HomPoly::new(d, 0, vec![Complex64::new(1.0, 0.0)])?];
            for e in 1..=n {
                let next = row[e - 1].mul_poly(form)?;
                row.push(next);
            }
            powers.push(row);
        }
        substitute(&self.coeffs, &powers, 0, n, &self.basis)
    }

    /// Dehomogenization `q(z) = Q(1, z)`.
    pub fn to_affine(&self) -> super::AffinePoly {
        super::AffinePoly::from_homogeneous(self.clone())
    }
}

/// Cumulative composition counts for O(vars) ranking inside products.
struct RankTable {
    vars: usize,
    n: usize,
    cum: Vec<usize>,
}

impl RankTable {
    fn new(vars: usize, n: usize) -> Self {
        let side = n + 1;
        let mut cum = vec![0usize; vars * side * side];
        for parts in 1..vars {
            for rest in 0..=n {
                // cum[parts][rest][a] = sum_{v=a+1}^{rest} comp(rest - v, parts)
                let mut acc = 0usize;
                for a in (0..=rest).rev() {
                    cum[(parts * side + rest) * side + a] = acc;
                    acc += compositions(rest - a, parts);
                }
            }
        }
        Self { vars, n, cum }
    }

    fn rank(&self, alpha: &[u32]) -> usize {
        let side = self.n + 1;
        let mut rest = self.n;
        let mut idx = 0;
        for (j, &a) in alpha.iter().enumerate().take(self.vars - 1) {
            let parts = self.vars - j - 1;
            idx += self.cum[(parts * side + rest) * side + a as usize];
            rest -= a as usize;
        }
        idx
    }
}

fn nested_sum(
    coeffs: &[Complex64],
    pows: &[Complex64],
    stride: usize,
    level: usize,
    vars: usize,
    rest: usize,
) -> Complex64 {
    if level + 1 == vars {
        return coeffs[0] * pows[level * stride + rest];
    }
    let row = &pows[level * stride..(level + 1) * stride];
    if level + 2 == vars {
        let next = &pows[(level + 1) * stride..(level + 2) * stride];
        let mut acc = ZERO;
        for (i, a) in (0..=rest).rev().enumerate() {
            acc += coeffs[i] * row[a] * next[rest - a];
        }
        return acc;
    }
    let parts = vars - level - 1;
    let mut acc = ZERO;
    let mut offset = 0;
    for a in (0..=rest).rev() {
        let count = small_compositions(rest - a, parts);
        let slice = &coeffs[offset..offset + count];
        if slice.iter().any(|c| *c != ZERO) {
            acc += row[a] * nested_sum(slice, pows, stride, level + 1, vars, rest - a);
        }
        offset += count;
    }
    acc
}

#[inline]
fn small_compositions(m: usize, parts: usize) -> usize {
    match parts {
        2 => m + 1,
        3 => (m + 1) * (m + 2) / 2,
        4 => (m + 1) * (m + 2) * (m + 3) / 6,
        _ => compositions(m, parts),
    }
}

fn substitute(
    coeffs: &[Complex64],
    powers: &[Vec<HomPoly>],
    level: usize,
    rest: usize,
    basis: &Basis,
) -> Result<HomPoly> {
    let vars = powers.len();
    if level + 1 == vars {
        return Ok(powers[level][rest].scale(coeffs[0]));
    }
    let parts = vars - level - 1;
    let mut acc = HomPoly::zeros(basis.dim(), rest)?;
    let mut offset = 0;
    for a in (0..=rest).rev() {
        let count = compositions(rest - a, parts);
        let slice = &coeffs[offset..offset + count];
        offset += count;
        if slice.iter().all(|c| *c == ZERO) {
            continue;
        }
        let inner = substitute(slice, powers, level + 1, rest - a, basis)?;
        let term = powers[level][a].mul_poly(&inner)?;
        acc = acc.axpy(Complex64::new(1.0, 0.0), &term)?;
    }
    Ok(acc)
}

/// Reproducing kernel `K_N(., eta) = (zeta . conj(eta))^N`; `eta` must be a unit vector.
pub fn reproducing_kernel(d: usize, n: usize, eta: &[Complex64]) -> Result<HomPoly> {
    if eta.len() != d + 1 {
        return Err(Error::Shape(format!("eta must have {} components", d + 1)));
    }
    check_unit(eta, 1e-12)?;
    let basis = Basis::shared(d, n)?;
    let conj: Vec<Complex64> = eta.iter().map(|e| e.conj()).collect();
    let coeffs = (0..basis.len())
        .map(|i| {
            let alpha = basis.exponents(i);
            monomial_value(alpha, &conj) / basis.weight(i)
        })
        .collect();
    HomPoly::with_basis(basis, coeffs)
}

pub(crate) fn monomial_value(alpha: &[u32], z: &[Complex64]) -> Complex64 {
    alpha
        .iter()
        .zip(z)
        .fold(Complex64::new(1.0, 0.0), |acc, (&a, &zk)| acc * zk.powu(a))
}

impl Add for &HomPoly {
    type Output = HomPoly;
    fn add(self, rhs: &HomPoly) -> HomPoly {
        self.axpy(Complex64::new(1.0, 0.0), rhs).expect("mismatched polynomial spaces")
    }
}

impl Sub for &HomPoly {
    type Output = HomPoly;
    fn sub(self, rhs: &HomPoly) -> HomPoly {
        self.axpy(Complex64::new(-1.0, 0.0), rhs).expect("mismatched polynomial spaces")
    }
}

impl Mul<Complex64> for &HomPoly {
    type Output = HomPoly;
    fn mul(self, rhs: Complex64) -> HomPoly {
        self.scale(rhs)
    }
}
