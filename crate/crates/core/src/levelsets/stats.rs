use crate::quadrature::integrate_adaptive;

/// `P(Z > z)` for a standard normal `Z`.
pub fn normal_upper_tail(z: f64) -> f64 {
    if z < 0.0 {
        return 1.0 - normal_upper_tail(-z);
    }
    // substitute x = z + u/(1-u) to map [z, inf) to [0, 1)
    let density = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let x = z + u / (1.0 - u);
        (-0.5 * x * x).exp() / (1.0 - u).powi(2)
    };
    let r = integrate_adaptive(density, 0.0, 1.0, 1e-10, 1e-300).expect("smooth integrand");
    r.value / (2.0 * std::f64::consts::PI).sqrt()
}

/// One-sided Bonferroni critical value: `z` with `P(Z > z) = alpha / m`.
pub fn bonferroni_z(alpha: f64, m: usize) -> f64 {
    let target = alpha / m.max(1) as f64;
    let (mut lo, mut hi) = (0.0, 40.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if normal_upper_tail(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_quantiles() {
        assert!((normal_upper_tail(0.0) - 0.5).abs() < 1e-12);
        assert!((normal_upper_tail(1.959963984540054) - 0.025).abs() < 1e-10);
        assert!((bonferroni_z(0.05, 1) - 1.6448536269514722).abs() < 1e-8);
    }
}
