//! Closed forms of the library checked against independent numerical oracles.

use approx::assert_abs_diff_eq;
use wehrl::experiments::fock_limit_check;
use wehrl::functionals::{
    cap_concentration, cap_measure, distance_to_kernels, entropy_mc, extremal_concentration, extremal_entropy,
    wehrl_entropy, ConvexFn, Settings,
};
use wehrl::polyspace::{binomial_f64, AffinePoly, HomPoly};
use wehrl::quadrature::{mc_mean, CloudKind};
use wehrl::rng::{substream, Purpose};
use wehrl::Complex64;

/// Composite Simpson rule on `[a, b]` with `m` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        let x = a + h * i as f64;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}

/// `|zeta_1|^2` has density `d (1 - s)^{d-1}` on `[0, 1]`.
fn pole_density(d: usize, s: f64) -> f64 {
    d as f64 * (1.0 - s).powi(d as i32 - 1)
}

fn extremal_entropy_oracle(n: usize, d: usize, phi: &ConvexFn, kink: Option<f64>) -> f64 {
    let f = |s: f64| phi.eval(s.powi(n as i32)) * pole_density(d, s);
    let integral = match kink {
        // |zeta_1|^{2N} = t0 at s = t0^{1/N}
        Some(t0) => {
            let s0 = t0.powf(1.0 / n as f64);
            simpson(f, 0.0, s0, 20_000) + simpson(f, s0, 1.0, 20_000)
        }
        None => simpson(f, 0.0, 1.0, 40_000),
    };
    -binomial_f64(n + d, d) * integral
}

#[test]
fn extremal_entropy_matches_simpson() {
    for d in 1..=3 {
        for n in [1, 2, 4, 8] {
            let xlogx = extremal_entropy(n, d, &ConvexFn::xlogx()).unwrap().value;
            assert_abs_diff_eq!(xlogx, extremal_entropy_oracle(n, d, &ConvexFn::xlogx(), None), epsilon = 1e-8);
            let p2 = ConvexFn::power(2.0).unwrap();
            assert_abs_diff_eq!(
                extremal_entropy(n, d, &p2).unwrap().value,
                extremal_entropy_oracle(n, d, &p2, None),
                epsilon = 1e-10
            );
            for t0 in [0.3f64, 0.7] {
                let h = ConvexFn::hinge(t0).unwrap();
                assert_abs_diff_eq!(
                    extremal_entropy(n, d, &h).unwrap().value,
                    extremal_entropy_oracle(n, d, &h, Some(t0)),
                    epsilon = 1e-9
                );
            }
        }
    }
}

#[test]
fn one_dimensional_wehrl_entropy_of_the_pole() {
    // S(zeta_1^N) = N/(N+1) for d = 1
    for n in 1..=10 {
        let q = HomPoly::coordinate_power(1, n, 0).unwrap();
        let s = wehrl_entropy(&q, &ConvexFn::xlogx(), &Settings::default()).unwrap().estimate;
        assert_abs_diff_eq!(s.value, n as f64 / (n as f64 + 1.0), epsilon = 1e-10);
    }
}

#[test]
fn power_entropy_of_a_kernel_is_a_binomial_ratio() {
    // int |zeta_1|^{2Np} = 1/binom(Np + d, d)
    for d in 1..=2 {
        for n in 1..=4 {
            let q = HomPoly::coordinate_power(d, n, 0).unwrap();
            let s = wehrl_entropy(&q, &ConvexFn::power(2.0).unwrap(), &Settings::default()).unwrap().estimate;
            let oracle = -binomial_f64(n + d, d) / binomial_f64(2 * n + d, d);
            assert!(s.is_exact());
            assert_abs_diff_eq!(s.value, oracle, epsilon = 1e-12);
        }
    }
}

#[test]
fn extremal_concentration_matches_simpson() {
    for d in 1..=3 {
        for n in [1, 3, 6] {
            for omega in [0.05f64, 0.3, 0.8] {
                let s0 = 1.0 - omega.powf(1.0 / d as f64);
                let oracle =
                    binomial_f64(n + d, d) * simpson(|s| s.powi(n as i32) * pole_density(d, s), s0, 1.0, 20_000);
                assert_abs_diff_eq!(extremal_concentration(n, d, omega).unwrap(), oracle, epsilon = 1e-10);
            }
        }
    }
}

#[test]
fn cap_measure_matches_monte_carlo() {
    let (n, d, t) = (3, 2, 0.2f64);
    let c = t.powf(1.0 / n as f64);
    let est = mc_mean(CloudKind::Sphere, d, 400_000, 5, || (), |_, z| f64::from(u8::from(z[0].norm_sqr() > c))).unwrap();
    let exact = cap_measure(n, d, t).unwrap();
    assert!((est.value - exact).abs() < 5.0 * est.err(), "{} vs {exact}", est.value);
}

#[test]
fn cap_concentration_matches_monte_carlo() {
    let mut rng = substream(3, Purpose::Polynomials, 0);
    let q = HomPoly::random_unit(2, 4, &mut rng).unwrap();
    let eta = vec![Complex64::new(0.0, 0.0), Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
    let t = 0.05f64;
    let exact = cap_concentration(&q, &eta, t).unwrap();
    let c = t.powf(0.25);
    let binom = binomial_f64(6, 2);
    let est = mc_mean(CloudKind::Sphere, 2, 400_000, 9, Vec::new, |s, z| {
        let inner: Complex64 = z.iter().zip(&eta).map(|(a, b)| a * b.conj()).sum();
        if inner.norm_sqr() > c {
            binom * q.modulus_sqr_with(z, s)
        } else {
            0.0
        }
    })
    .unwrap();
    assert!((est.value - exact).abs() < 5.0 * est.err(), "{} vs {exact}", est.value);
}

#[test]
fn rule_entropy_agrees_with_monte_carlo() {
    let mut rng = substream(4, Purpose::Polynomials, 0);
    let q = HomPoly::random_unit(2, 4, &mut rng).unwrap();
    let phi = ConvexFn::xlogx();
    let rule = wehrl_entropy(&q, &phi, &Settings::default()).unwrap().estimate;
    let mc = entropy_mc(&q, &phi, &Settings::default().with_samples(400_000).with_seed(2)).unwrap().estimate;
    assert!((rule.value - mc.value).abs() < 5.0 * mc.err() + rule.err(), "{} vs {}", rule.value, mc.value);
}

#[test]
fn distance_of_a_balanced_binomial() {
    // (zeta_1^N + zeta_2^N)/sqrt(2) has sup |Q|^2 = 1/2
    let h = 0.5f64.sqrt();
    let q = HomPoly::from_terms(1, 5, [(vec![5, 0].into(), Complex64::new(h, 0.0)), (vec![0, 5].into(), Complex64::new(h, 0.0))])
        .unwrap();
    let (dist, sup) = distance_to_kernels(&q, &Settings::default()).unwrap();
    assert_abs_diff_eq!(sup.t, 0.5, epsilon = 1e-10);
    assert_abs_diff_eq!(dist * dist, 2.0 - 2.0f64.sqrt(), epsilon = 1e-9);
}

#[test]
fn fock_oracle_of_the_constant_function() {
    // unit ball area in C^1: Gaussian mass 1 - e^{-1}
    let one = AffinePoly::from_terms(1, 0, [(vec![0], Complex64::new(1.0, 0.0))]).unwrap();
    let r = fock_limit_check(&one, &[64], 1.0, &ConvexFn::xlogx(), &Settings::default().with_seed(3)).unwrap();
    let oracle = 1.0 - (-1.0f64).exp();
    assert!((r.oracle_concentration.value - oracle).abs() < 5.0 * r.oracle_concentration.err());
    assert!(r.oracle_distance < 1e-6);
}
