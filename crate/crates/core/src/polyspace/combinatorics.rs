use crate::{Error, Result};

/// `binom(n, k)` as an exact integer, or a size error when it overflows `usize`.
pub fn binomial(n: usize, k: usize) -> Result<usize> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or_else(|| Error::Size(format!("binom({n},{k}) overflows")))?
            / (i as u128 + 1);
    }
    usize::try_from(acc).map_err(|_| Error::Size(format!("binom({n},{k}) overflows usize")))
}

/// `binom(n, k)` in floating point (multiplicative formula).
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// `ln(k!)` for `k = 0..=n`.
pub fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0f64;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Multinomial coefficient `N! / alpha!` in floating point.
pub fn multinomial_f64(alpha: &[u32]) -> f64 {
    let mut total = 0usize;
    let mut acc = 1.0f64;
    for &a in alpha {
        total += a as usize;
        acc *= binomial_f64(total, a as usize);
    }
    acc
}

/// Number of compositions of `m` into `parts` non-negative parts.
pub(crate) fn compositions(m: usize, parts: usize) -> usize {
    if parts == 0 {
        return usize::from(m == 0);
    }
    // callers only ask for counts that already fit (bounded by a basis size)
    binomial(m + parts - 1, parts - 1).expect("composition count overflow")
}

/// Regularized incomplete beta `I_x(a, b)` for positive integers,
/// evaluated as the binomial tail `P(Bin(a + b - 1, x) >= a)`.
pub fn incomplete_beta_int(x: f64, a: usize, b: usize) -> f64 {
    assert!(a >= 1 && b >= 1);
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let n = a + b - 1;
    let lf = ln_factorials(n);
    let (lx, l1x) = (x.ln(), (-x).ln_1p());
    let term = |j: usize| (lf[n] - lf[j] - lf[n - j] + j as f64 * lx + (n - j) as f64 * l1x).exp();
    // sum the shorter tail to limit cancellation
    if a as f64 > n as f64 * x {
        (a..=n).map(term).sum::<f64>().min(1.0)
    } else {
        (1.0 - (0..a).map(term).sum::<f64>()).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2).unwrap(), 10);
        assert_eq!(binomial(3, 1).unwrap(), 3);
        assert_eq!(binomial(2, 3).unwrap(), 0);
        assert!(binomial(400, 200).is_err());
        assert!((binomial_f64(40, 20) - 137_846_528_820.0).abs() < 1e-3);
    }

    #[test]
    fn incomplete_beta_closed_forms() {
        // I_x(1, b) = 1 - (1 - x)^b
        for &x in &[0.1, 0.5, 0.93] {
            let want = 1.0 - (1.0f64 - x).powi(5);
            assert!((incomplete_beta_int(x, 1, 5) - want).abs() < 1e-14);
            // I_x(a, 1) = x^a
            assert!((incomplete_beta_int(x, 4, 1) - x.powi(4)).abs() < 1e-14);
        }
        // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
        let s = incomplete_beta_int(0.3, 7, 4) + incomplete_beta_int(0.7, 4, 7);
        assert!((s - 1.0).abs() < 1e-14);
    }
}
