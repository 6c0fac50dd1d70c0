use super::point::{hermitian, norm};
use crate::{Complex64, Error, Result};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

/// Checks `||R^* R - I||_F <= tol`.
pub fn check_unitary(r: &DMatrix<Complex64>, tol: f64) -> Result<()> {
    if r.nrows() != r.ncols() {
        return Err(Error::Shape("rotation must be square".into()));
    }
    let n = r.nrows();
    let defect = (r.adjoint() * r - DMatrix::<Complex64>::identity(n, n)).norm();
    if !(defect <= tol) {
        return Err(Error::Domain(format!("matrix is not unitary, ||R*R - I|| = {defect:e}")));
    }
    Ok(())
}

/// Haar-distributed unitary via Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    loop {
        let cols: Vec<Vec<Complex64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect()
            })
            .collect();
        if let Some(q) = gram_schmidt(cols) {
            return q;
        }
    }
}

/// Unitary whose first column is the unit vector `eta`, so that it maps the
/// pole `e_1` to `eta`.
pub fn unitary_with_first_column(eta: &[Complex64]) -> Result<DMatrix<Complex64>> {
    super::point::check_unit(eta, 1e-10)?;
    let n = eta.len();
    let mut cols = vec![eta.to_vec()];
    // complete with the standard basis vectors least aligned with eta
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eta[a].norm().total_cmp(&eta[b].norm()));
    for &k in order.iter().take(n - 1) {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[k] = Complex64::new(1.0, 0.0);
        cols.push(e);
    }
    gram_schmidt(cols).ok_or_else(|| Error::Domain("could not complete eta to a basis".into()))
}

fn gram_schmidt(mut cols: Vec<Vec<Complex64>>) -> Option<DMatrix<Complex64>> {
    let n = cols.len();
    for j in 0..n {
        for _ in 0..2 {
            for i in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let proj = hermitian(&rest[0], &done[i]);
                for (x, y) in rest[0].iter_mut().zip(&done[i]) {
                    *x -= proj * y;
                }
            }
        }
        let nrm = norm(&cols[j]);
        if nrm < 1e-8 {
            return None;
        }
        for x in cols[j].iter_mut() {
            *x /= nrm;
        }
    }
    Some(DMatrix::from_fn(n, n, |i, j| cols[j][i]))
}
