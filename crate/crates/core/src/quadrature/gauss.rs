use crate::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};

/// Monic three-term recurrence coefficients of the Jacobi polynomials for the
/// weight `(1 - x)^a (1 + x)^b` on `[-1, 1]`.
fn jacobi_recurrence(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n + 1);
    beta.push(0.0);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        alpha.push(if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        });
    }
    for k in 1..=n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        beta.push(
            4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (s * s * (s + 1.0) * (s - 1.0)),
        );
    }
    (alpha, beta)
}

/// Orthonormal polynomial values `p_0..p_n` at `x` (probability normalization),
/// together with `p_n'(x)`.
fn orthonormal_values(x: f64, alpha: &[f64], beta: &[f64], out: &mut Vec<f64>) -> f64 {
    let n = alpha.len();
    out.clear();
    out.push(1.0);
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut dp_prev, mut dp) = (0.0, 0.0);
    for k in 0..n {
        let sb_next = beta[k + 1].sqrt();
        let sb = beta[k].sqrt();
        let p_next = ((x - alpha[k]) * p - sb * p_prev) / sb_next;
        let dp_next = (p + (x - alpha[k]) * dp - sb * dp_prev) / sb_next;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
        out.push(p);
    }
    dp
}

/// Gauss–Jacobi rule with `n` nodes for `(1 - x)^a (1 + x)^b` on `[-1, 1]`.
///
/// Nodes are ascending; weights are normalized to sum to one, so the rule
/// integrates against the probability measure proportional to the weight.
/// Exact for polynomials of degree `2n - 1`.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Domain("a Gauss rule needs at least one node".into()));
    }
    if !(a >= 0.0 && b >= 0.0) {
        return Err(Error::Domain(format!("Jacobi exponents must be nonnegative, got ({a}, {b})")));
    }
    let (alpha, beta) = jacobi_recurrence(n, a, b);
    let jac = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[j].sqrt()
        } else if j + 1 == i {
            beta[i].sqrt()
        } else {
            0.0
        }
    });
    let mut guesses: Vec<f64> = SymmetricEigen::new(jac).eigenvalues.iter().copied().collect();
    guesses.sort_by(f64::total_cmp);

    let mut vals = Vec::with_capacity(n + 1);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for x0 in guesses {
        let mut x = x0;
        for _ in 0..50 {
            let dp = orthonormal_values(x, &alpha, &beta, &mut vals);
            let step = vals[n] / dp;
            x -= step;
            if step.abs() <= 1e-15 * x.abs().max(1e-3) {
                break;
            }
        }
        // residual measured as the Newton correction |p_n / p_n'|
        let dp = orthonormal_values(x, &alpha, &beta, &mut vals);
        let residual = (vals[n] / dp).abs();
        let christoffel: f64 = vals[..n].iter().map(|p| p * p).sum();
        if !(residual <= 1e-14) {
            return Err(Error::NonConvergence {
                message: format!("Gauss–Jacobi node refinement (n={n}, a={a}, b={b})"),
                best: residual,
            });
        }
        nodes.push(x);
        weights.push(1.0 / christoffel);
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    Ok((nodes, weights))
}

/// Gauss–Legendre rule on `[lo, hi]` (weights sum to `hi - lo`).
pub fn gauss_legendre(n: usize, lo: f64, hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (x, w) = gauss_jacobi(n, 0.0, 0.0)?;
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    Ok((
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|v| v * (hi - lo)).collect(),
    ))
}

/// `∫_lo^hi f` by an `n`-point Gauss–Legendre rule.
pub fn integrate_legendre<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Result<f64> {
    let (x, w) = gauss_legendre(n, lo, hi)?;
    Ok(x.iter().zip(&w).map(|(t, v)| v * f(*t)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_known_nodes() {
        let (x, w) = gauss_legendre(2, -1.0, 1.0).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(3, -1.0, 1.0).unwrap();
        assert!((x[2] - 0.6f64.sqrt()).abs() < 1e-15);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn jacobi_is_exact_to_degree_2n_minus_1() {
        // weight (1-x)^a on [-1,1], normalized: E[(1+x)^k] = 2^k * B(k+1, a+1)/B(1, a+1)
        for a in 0..5 {
            let af = a as f64;
            for n in 1..12 {
                let (x, w) = gauss_jacobi(n, af, 0.0).unwrap();
                for k in 0..2 * n {
                    let got: f64 = x.iter().zip(&w).map(|(t, v)| v * ((1.0 + t) / 2.0).powi(k as i32)).sum();
                    // E[u^k] with density (a+1)(1-u)^a on [0,1]
                    let mut want = 1.0;
                    for j in 1..=k {
                        want *= j as f64 / (j as f64 + af + 1.0);
                    }
                    assert!((got - want).abs() < 1e-14, "a={a} n={n} k={k}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn large_rules_converge() {
        let (x, w) = gauss_jacobi(200, 3.0, 0.0).unwrap();
        assert_eq!(x.len(), 200);
        assert!(w.iter().all(|&v| v > 0.0));
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }
}
