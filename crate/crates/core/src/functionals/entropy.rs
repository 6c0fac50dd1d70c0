use super::convex::{ConvexFn, PhiKind};
use super::method::Method;
use super::settings::Settings;
use super::sup::{check_normalized, NORM_TOL};
use crate::estimate::Estimate;
use crate::polyspace::{binomial_f64, incomplete_beta_int, HomPoly};
use crate::quadrature::{gauss_jacobi, integrate_adaptive_budget, mc_mean, CloudKind, SphereRule};
use crate::{Complex64, Error, Result};
use serde::Serialize;
use std::cell::{Cell, RefCell};
use std::f64::consts::{FRAC_PI_2, TAU};

/// Largest product-rule node count the automatic degree selection will use.
const NODE_BUDGET: f64 = 2.0e6;

/// An entropy value with its provenance.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyResult {
    pub estimate: Estimate,
    pub method: Method,
}

fn rule_nodes(degree: usize, d: usize) -> f64 {
    (((degree + 2) / 2) as f64).powi(d as i32) * ((degree + 1) as f64).powi(d as i32)
}

/// A function `U` on the sphere with values in `[0, 1]`, such as `|Q|^2` for a
/// unit-norm polynomial or the Husimi function of a state.
pub trait ModulusField: Sync {
    fn degree(&self) -> usize;
    fn dim(&self) -> usize;
    fn value_with(&self, z: &[Complex64], scratch: &mut Vec<Complex64>) -> f64;
    /// True when `U` depends only on the first two coordinates.
    fn is_binary(&self) -> bool;
}

impl ModulusField for HomPoly {
    fn degree(&self) -> usize {
        HomPoly::degree(self)
    }

    fn dim(&self) -> usize {
        HomPoly::dim(self)
    }

    fn value_with(&self, z: &[Complex64], scratch: &mut Vec<Complex64>) -> f64 {
        self.modulus_sqr_with(z, scratch)
    }

    fn is_binary(&self) -> bool {
        is_binary(self)
    }
}

/// Largest rule degree whose node count fits the budget.
pub fn max_rule_degree(d: usize) -> usize {
    let mut deg = 2;
    while rule_nodes(deg + 1, d) <= NODE_BUDGET {
        deg += 1;
    }
    deg
}

/// Default degree for non-polynomial integrands: `4N`, capped by the node budget.
pub fn default_rule_degree(n: usize, d: usize) -> usize {
    (4 * n).max(4).min(max_rule_degree(d))
}

fn clamp_modulus(u: f64) -> Result<f64> {
    if u > 1.0 + NORM_TOL {
        return Err(Error::Domain(format!(
            "|Q|^2 = {u} exceeds 1 for a unit-norm polynomial (normalization bug)"
        )));
    }
    Ok(u.clamp(0.0, 1.0))
}

/// `-binom(N+d, d) sum_i w_i Phi(U(zeta_i))` on a product rule.
pub fn entropy_on_rule<M: ModulusField + ?Sized>(q: &M, phi: &ConvexFn, rule: &SphereRule) -> Result<f64> {
    if rule.dim() != q.dim() {
        return Err(Error::Shape("rule dimension differs from the polynomial's".into()));
    }
    let binom = binomial_f64(q.degree() + q.dim(), q.dim());
    let integral = rule.integrate_with(Vec::new, |s, z| {
        let u = q.value_with(z, s);
        if u > 1.0 + NORM_TOL {
            f64::NAN
        } else {
            phi.eval(u.clamp(0.0, 1.0))
        }
    });
    match integral {
        Ok(v) => Ok(-binom * v),
        Err(Error::Evaluation { node, .. }) => {
            let u = q.value_with(rule.node(node), &mut Vec::new());
            clamp_modulus(u)?;
            Err(Error::Evaluation {
                node,
                message: format!("Phi({u}) is not finite"),
            })
        }
        Err(e) => Err(e),
    }
}

/// True when `Q` only involves the first two variables.
pub fn is_binary(q: &HomPoly) -> bool {
    q.terms().all(|(alpha, c)| alpha[2..].iter().all(|&a| a == 0) || c == Complex64::new(0.0, 0.0))
}

/// `E[s^m]` for `s ~ Beta(2, d - 1)`, i.e. `(m+1)! d! / (m+d)!`.
fn beta2_moment(m: usize, d: usize) -> f64 {
    (2..=d).map(|k| k as f64 / (m + k) as f64).product()
}

/// `Psi(u) = E[Phi(s^N u)]` with `s = |zeta_1|^2 + |zeta_2|^2 ~ Beta(2, d-1)`, so
/// that a binary polynomial's entropy reduces to an integral over the 3-sphere.
fn radial_average(phi: &ConvexFn, n: usize, d: usize) -> Result<Box<dyn Fn(f64) -> f64 + Send + Sync>> {
    if d == 1 {
        let phi = phi.clone();
        return Ok(Box::new(move |u| phi.eval(u)));
    }
    let m = beta2_moment(n, d);
    match phi.kind() {
        PhiKind::XLogX => {
            let harmonic: f64 = (n + 2..=n + d).map(|k| 1.0 / k as f64).sum();
            let log_mean = -(n as f64) * harmonic;
            Ok(Box::new(move |u: f64| if u > 0.0 { m * (u * u.ln() + u * log_mean) } else { 0.0 }))
        }
        PhiKind::Power(p) if (p * n as f64).fract() == 0.0 => {
            let (p, mp) = (*p, beta2_moment((p * n as f64) as usize, d));
            Ok(Box::new(move |u: f64| mp * u.powf(p)))
        }
        PhiKind::Hinge(t0) => {
            let t0 = *t0;
            Ok(Box::new(move |u: f64| {
                if u <= t0 {
                    return 0.0;
                }
                let c = (t0 / u).powf(1.0 / n as f64);
                u * m * (1.0 - incomplete_beta_int(c, n + 2, d - 1)) - t0 * (1.0 - incomplete_beta_int(c, 2, d - 1))
            }))
        }
        PhiKind::Linear { a, b } => {
            let (a, b) = (*a, *b);
            Ok(Box::new(move |u: f64| a * m * u + b))
        }
        _ => {
            let (x, w) = gauss_jacobi(64, (d - 2) as f64, 1.0)?;
            let sn: Vec<f64> = x.iter().map(|t| (0.5 * (1.0 + t)).powi(n as i32)).collect();
            let phi = phi.clone();
            Ok(Box::new(move |u: f64| sn.iter().zip(&w).map(|(s, wi)| wi * phi.eval(s * u)).sum()))
        }
    }
}

/// Points of `[0, 2 pi)` where the periodic function `u` crosses `level`,
/// bracketed on a `grid`-point mesh and refined by bisection.
fn level_crossings(u: &dyn Fn(f64) -> f64, level: f64, grid: usize) -> Vec<f64> {
    let step = TAU / grid as f64;
    let mut out = Vec::new();
    let mut prev = u(0.0) - level;
    for i in 1..=grid {
        let x = step * i as f64;
        let cur = u(x) - level;
        if (prev > 0.0) != (cur > 0.0) {
            let (mut a, mut b) = (x - step, x);
            let sign_a = prev > 0.0;
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if (u(m) - level > 0.0) == sign_a {
                    a = m;
                } else {
                    b = m;
                }
            }
            let root = 0.5 * (a + b);
            if root > 0.0 && root < TAU {
                out.push(root);
            }
        }
        prev = cur;
    }
    out
}

/// Entropy of a field depending on `zeta_1, zeta_2` only, by nested adaptive
/// Gauss–Kronrod integration over `(|zeta_1|, arg zeta_2 - arg zeta_1)`.
pub fn entropy_binary_adaptive<M: ModulusField + ?Sized>(q: &M, phi: &ConvexFn) -> Result<Estimate> {
    if !q.is_binary() && q.dim() > 1 {
        return Err(Error::Domain("polynomial depends on more than two variables".into()));
    }
    let n = q.degree();
    let d = q.dim();
    let psi = radial_average(phi, n, d)?;
    let kink = match phi.kind() {
        PhiKind::Hinge(t0) => Some(*t0),
        _ => None,
    };
    let failure: Cell<Option<Error>> = Cell::new(None);
    let inner_err = Cell::new(0.0f64);
    let outer = |theta: f64| -> f64 {
        let (c, s) = (theta.cos(), theta.sin());
        let buffers = RefCell::new((Vec::new(), vec![Complex64::new(0.0, 0.0); d + 1]));
        let modulus = |phase: f64| {
            let (scratch, z) = &mut *buffers.borrow_mut();
            z[0] = Complex64::new(c, 0.0);
            z[1] = Complex64::from_polar(s, phase);
            q.value_with(z, scratch)
        };
        let inner = |phase: f64| {
            let u = modulus(phase);
            if u > 1.0 + NORM_TOL {
                f64::NAN
            } else {
                psi(u.clamp(0.0, 1.0))
            }
        };
        let mut nodes = vec![0.0];
        if let Some(t0) = kink {
            nodes.extend(level_crossings(&modulus, t0, 32 * (n + 1)));
        }
        nodes.push(TAU);
        let mut value = 0.0;
        let mut error = 0.0;
        for w in nodes.windows(2) {
            match integrate_adaptive_budget(inner, w[0], w[1], 1e-13, 1e-15, 500) {
                Ok(r) => {
                    value += r.value;
                    error += r.error;
                }
                Err(e) => {
                    failure.set(Some(e));
                    return f64::NAN;
                }
            }
        }
        inner_err.set(inner_err.get().max(error / TAU));
        (2.0 * theta).sin() * value / TAU
    };
    let result = integrate_adaptive_budget(outer, 0.0, FRAC_PI_2, 1e-12, 1e-14, 400);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let r = result?;
    let binom = binomial_f64(n + d, d);
    Ok(Estimate::with_stderr(-binom * r.value, binom * (r.error + inner_err.get())))
}

/// `S_{N,Phi}(Q) = -binom(N+d, d) int Phi(|Q|^2) d sigma`.
///
/// Linear `Phi` uses the closed form; `t^p` with integer `p` an exact rule of
/// degree `pN`; polynomials in two variables nested adaptive quadrature; hinge
/// functions Monte Carlo; anything else a product rule whose uncertainty is
/// estimated against a coarser rule. A `rule_degree` in the settings forces the
/// product rule.
pub fn wehrl_entropy(q: &HomPoly, phi: &ConvexFn, settings: &Settings) -> Result<EntropyResult> {
    check_normalized(q)?;
    field_entropy(q, phi, settings)
}

/// `-binom(N+d, d) int Phi(U) d sigma` for a field with `int U d sigma = 1/binom(N+d, d)`.
pub fn field_entropy<M: ModulusField + ?Sized>(q: &M, phi: &ConvexFn, settings: &Settings) -> Result<EntropyResult> {
    let n = q.degree();
    let d = q.dim();
    let binom = binomial_f64(n + d, d);
    if let PhiKind::Linear { a, b } = phi.kind() {
        return Ok(EntropyResult {
            estimate: Estimate::exact(-a - b * binom),
            method: Method::ClosedForm,
        });
    }
    if let Some(degree) = settings.rule_degree {
        return product_rule_entropy(q, phi, degree, (3 * degree / 4).max(1));
    }
    if let PhiKind::Power(p) = phi.kind() {
        if p.fract() == 0.0 && (*p as usize) * n <= max_rule_degree(d) {
            let degree = (*p as usize) * n;
            let rule = SphereRule::new(d, degree.max(1))?;
            return Ok(EntropyResult {
                estimate: Estimate::exact(entropy_on_rule(q, phi, &rule)?),
                method: Method::ExactRule { degree },
            });
        }
    }
    if d == 1 || q.is_binary() {
        return Ok(EntropyResult {
            estimate: entropy_binary_adaptive(q, phi)?,
            method: Method::Adaptive,
        });
    }
    if let PhiKind::Hinge(_) = phi.kind() {
        return entropy_mc(q, phi, settings);
    }
    let degree = default_rule_degree(n, d);
    product_rule_entropy(q, phi, degree, (3 * degree / 4).max(1))
}

fn product_rule_entropy<M: ModulusField + ?Sized>(q: &M, phi: &ConvexFn, degree: usize, reference: usize) -> Result<EntropyResult> {
    let d = q.dim();
    let fine = entropy_on_rule(q, phi, &SphereRule::new(d, degree)?)?;
    let coarse = entropy_on_rule(q, phi, &SphereRule::new(d, reference)?)?;
    Ok(EntropyResult {
        estimate: Estimate::with_stderr(fine, (fine - coarse).abs()),
        method: Method::ProductRule {
            degree,
            reference_degree: reference,
        },
    })
}

/// Monte Carlo entropy over a seeded sphere cloud.
pub fn entropy_mc<M: ModulusField + ?Sized>(q: &M, phi: &ConvexFn, settings: &Settings) -> Result<EntropyResult> {
    let binom = binomial_f64(q.degree() + q.dim(), q.dim());
    let est = mc_mean(CloudKind::Sphere, q.dim(), settings.samples, settings.seed, Vec::new, |s, z| {
        let u = q.value_with(z, s);
        if u > 1.0 + NORM_TOL {
            f64::NAN
        } else {
            phi.eval(u.clamp(0.0, 1.0))
        }
    })?;
    Ok(EntropyResult {
        estimate: est.scale(-binom),
        method: Method::MonteCarlo {
            samples: settings.samples,
            seed: settings.seed,
        },
    })
}

/// `S_{N,Phi}(zeta_1^N) = -binom(N+d, d) int_0^1 Phi(mu_0^{-1}(s)) ds`, evaluated
/// after `s = u^d` as `-binom d int_0^1 u^{d-1} Phi((1-u)^N) du`.
pub fn extremal_entropy(n: usize, d: usize, phi: &ConvexFn) -> Result<Estimate> {
    if n == 0 || d == 0 {
        return Err(Error::Domain("extremal entropy needs N >= 1 and d >= 1".into()));
    }
    let binom = binomial_f64(n + d, d);
    if let PhiKind::Linear { a, b } = phi.kind() {
        return Ok(Estimate::exact(-a - b * binom));
    }
    let df = d as f64;
    let f = |u: f64| df * u.powi(d as i32 - 1) * phi.eval((1.0 - u).powi(n as i32));
    // split at the kink of a hinge
    let mut breaks = vec![0.0, 1.0];
    if let PhiKind::Hinge(t0) = phi.kind() {
        breaks.insert(1, 1.0 - t0.powf(1.0 / n as f64));
    }
    let mut value = 0.0;
    let mut error = 0.0;
    for w in breaks.windows(2) {
        let r = integrate_adaptive_budget(f, w[0], w[1], 1e-14, 1e-17, 20_000)?;
        value += r.value;
        error += r.error;
    }
    Ok(Estimate::with_stderr(-binom * value, binom * error))
}

/// `S_{N,Phi}(Q) - S_{N,Phi}(zeta_1^N)` with its uncertainty.
///
/// Where the entropy itself is approximate (product rule or Monte Carlo), the
/// kernel `K_N(., eta)` at a maximizer `eta` of `|Q|^2` is evaluated with the same
/// nodes and subtracted, so that discretization errors largely cancel for
/// polynomials near the kernel.
pub fn entropy_deficit(
    q: &HomPoly,
    phi: &ConvexFn,
    settings: &Settings,
    eta: Option<&[Complex64]>,
) -> Result<(Estimate, Method)> {
    check_normalized(q)?;
    let n = q.degree();
    let d = q.dim();
    let ext = extremal_entropy(n, d, phi)?;
    let direct = |r: EntropyResult| (r.estimate.minus(&ext), r.method);
    let kernel = |eta: Option<&[Complex64]>| -> Result<HomPoly> {
        let eta = match eta {
            Some(e) => e.to_vec(),
            None => super::sup::sup_modulus(q, settings)?.argmax,
        };
        crate::polyspace::reproducing_kernel(d, n, &eta)
    };
    let binom = binomial_f64(n + d, d);
    if let PhiKind::Linear { .. } = phi.kind() {
        return Ok((Estimate::exact(0.0), Method::ClosedForm));
    }
    let product = |degree: usize, reference: usize, eta: Option<&[Complex64]>| -> Result<(Estimate, Method)> {
        let k = kernel(eta)?;
        let diff = |deg: usize| -> Result<f64> {
            let rule = SphereRule::new(d, deg)?;
            Ok(entropy_on_rule(q, phi, &rule)? - entropy_on_rule(&k, phi, &rule)?)
        };
        let fine = diff(degree)?;
        let coarse = diff(reference)?;
        Ok((
            Estimate::with_stderr(fine, (fine - coarse).abs()),
            Method::ProductRule {
                degree,
                reference_degree: reference,
            },
        ))
    };
    if let Some(degree) = settings.rule_degree {
        return product(degree, (3 * degree / 4).max(1), eta);
    }
    if let PhiKind::Power(p) = phi.kind() {
        if p.fract() == 0.0 && (*p as usize) * n <= max_rule_degree(d) {
            return Ok(direct(field_entropy(q, phi, settings)?));
        }
    }
    if d == 1 || q.is_binary() {
        return Ok(direct(field_entropy(q, phi, settings)?));
    }
    if let PhiKind::Hinge(_) = phi.kind() {
        let k = kernel(eta)?;
        let est = mc_mean(CloudKind::Sphere, d, settings.samples, settings.seed, Vec::new, |s, z| {
            let uq = q.modulus_sqr_with(z, s).clamp(0.0, 1.0);
            let uk = k.modulus_sqr_with(z, s).clamp(0.0, 1.0);
            phi.eval(uq) - phi.eval(uk)
        })?;
        return Ok((
            est.scale(-binom),
            Method::MonteCarlo {
                samples: settings.samples,
                seed: settings.seed,
            },
        ));
    }
    let degree = default_rule_degree(n, d);
    product(degree, (3 * degree / 4).max(1), eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyspace::reproducing_kernel;
    use crate::rng::{substream, Purpose};

    #[test]
    fn linear_and_power_closed_forms() {
        let mut rng = substream(31, Purpose::Polynomials, 0);
        let q = HomPoly::random_unit(2, 3, &mut rng).unwrap();
        let s = Settings::default();
        let lin = wehrl_entropy(&q, &ConvexFn::linear(1.0, 0.0), &s).unwrap();
        assert_eq!(lin.estimate.value, -1.0);
        // maximally spread: S(t^2) for zeta_1^N is -binom / binom(2N+d, d)
        let z = HomPoly::coordinate_power(2, 3, 0).unwrap();
        let p2 = ConvexFn::power(2.0).unwrap();
        let v = wehrl_entropy(&z, &p2, &s).unwrap().estimate.value;
        let want = -binomial_f64(5, 2) / binomial_f64(8, 2);
        assert!((v - want).abs() < 1e-13);
        let e = extremal_entropy(3, 2, &p2).unwrap();
        assert!((e.value - want).abs() < 1e-12);
    }

    #[test]
    fn extremal_entropy_matches_quadrature() {
        for (d, n) in [(1, 4), (2, 3)] {
            for phi in [ConvexFn::xlogx(), ConvexFn::hinge(0.3).unwrap()] {
                let e = extremal_entropy(n, d, &phi).unwrap();
                let z = HomPoly::coordinate_power(d, n, 0).unwrap();
                let a = entropy_binary_adaptive(&z, &phi).unwrap();
                assert!((e.value - a.value).abs() < 1e-9, "{d} {n} {phi}: {} vs {}", e.value, a.value);
            }
        }
    }

    #[test]
    fn hinge_extremal_reduction() {
        // -binom int_0^{mu_0(t0)} (mu_0^{-1}(s) - t0) ds
        let (n, d, t0) = (4usize, 2usize, 0.3f64);
        let ext = crate::levelsets::ExtremalProfile { n, d };
        let s0 = ext.mu(t0);
        let want = -binomial_f64(n + d, d) * (ext.integral_mu_inverse(s0) - t0 * s0);
        let got = extremal_entropy(n, d, &ConvexFn::hinge(t0).unwrap()).unwrap();
        assert!((got.value - want).abs() < 1e-12);
    }

    #[test]
    fn binary_reduction_agrees_with_product_rule() {
        let mut rng = substream(32, Purpose::Polynomials, 0);
        let q2 = HomPoly::random_unit(1, 4, &mut rng).unwrap();
        // embed into d = 2 (terms with zeta_3 absent)
        let terms = q2.terms().map(|(a, c)| (vec![a[0], a[1], 0].into(), c));
        let q = HomPoly::from_terms(2, 4, terms).unwrap().normalized().unwrap();
        let p3 = ConvexFn::power(3.0).unwrap();
        let adaptive = entropy_binary_adaptive(&q, &p3).unwrap();
        let exact = entropy_on_rule(&q, &p3, &SphereRule::new(2, 12).unwrap()).unwrap();
        assert!((adaptive.value - exact).abs() < 1e-10);
        let x = ConvexFn::xlogx();
        let adaptive = entropy_binary_adaptive(&q, &x).unwrap();
        let rule = product_rule_entropy(&q, &x, 40, 30).unwrap();
        assert!((adaptive.value - rule.estimate.value).abs() < 1e-4 + rule.estimate.err());
    }

    #[test]
    fn kernel_entropy_is_extremal() {
        let s = 0.5f64.sqrt();
        let k = reproducing_kernel(2, 3, &[Complex64::new(s, 0.0), Complex64::new(0.0, s), Complex64::new(0.0, 0.0)])
            .unwrap();
        let phi = ConvexFn::xlogx();
        let v = wehrl_entropy(&k, &phi, &Settings::default()).unwrap();
        let e = extremal_entropy(3, 2, &phi).unwrap();
        assert!((v.estimate.value - e.value).abs() < 1e-9);
    }
}
