//! Acceptance criteria, run in sequence with one PASS/FAIL line each.
//!
//! Pass criterion numbers as arguments to run a subset, e.g.
//! `cargo test -p wehrl-validation --test acceptance -- 3 7`.

use rand::Rng;
use std::process::ExitCode;
use std::time::Instant;
use wehrl::experiments::{
    differential_inequality_audit, fock_limit_check, sharpness_family, sweep_concentration_stability,
    sweep_wehrl_stability, Generator, Status, SweepConfig, EXPECTED_DEFICIT_SLOPE, EXPECTED_DISTANCE_SLOPE,
};
use wehrl::functionals::{
    cap_concentration, cap_measure, concentration, extremal_concentration, extremal_entropy, min_kernel_distance_sqr,
    sup_modulus, wehrl_entropy, ConvexFn, RegionSpec, Settings,
};
use wehrl::levelsets::{AuditStatus, LevelProfile};
use wehrl::polyspace::{binomial_f64, normalize, reproducing_kernel, AffinePoly, HomPoly};
use wehrl::quadrature::{sample_sphere, SphereRule};
use wehrl::rng::{substream, Purpose};
use wehrl::states::{state_concentration, state_entropy, trace_distance_to_coherent, DensityState};
use wehrl::Complex64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_point(d: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    wehrl::experiments::random_center(d, rng)
}

fn inner_product_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for d in 1..=3 {
        for n in 1..=8 {
            let rule = SphereRule::new(d, n).expect("rule");
            let binom = binomial_f64(n + d, d);
            let mut rng = substream(1, Purpose::Polynomials, (d * 100 + n) as u64);
            for _ in 0..50 {
                let p = HomPoly::random_unit(d, n, &mut rng).expect("poly");
                let q = HomPoly::random_unit(d, n, &mut rng).expect("poly");
                let exact = p.bombieri_inner(&q).expect("inner");
                let part = |imag: bool| {
                    rule.integrate_with(Vec::new, |s, z| {
                        let v = p.eval_with(z, s) * q.eval_with(z, s).conj();
                        if imag {
                            v.im
                        } else {
                            v.re
                        }
                    })
                    .expect("quadrature")
                };
                let quad = Complex64::new(part(false), part(true)) * binom;
                worst = worst.max((quad - exact).norm());
            }
        }
    }
    outcome(worst <= 1e-10, format!("max |quadrature - Bombieri| = {worst:.3e} (tol 1e-10)"))
}

fn kernel_axioms() -> Outcome {
    let mut worst_norm = 0.0f64;
    let mut worst_repr = 0.0f64;
    for d in 1..=3 {
        for n in 1..=8 {
            let mut rng = substream(2, Purpose::Polynomials, (d * 100 + n) as u64);
            for _ in 0..100 {
                let eta = random_point(d, &mut rng);
                let k = reproducing_kernel(d, n, &eta).expect("kernel");
                worst_norm = worst_norm.max((k.norm() - 1.0).abs());
                let q = HomPoly::random_unit(d, n, &mut rng).expect("poly");
                let repr = q.bombieri_inner(&k).expect("inner") - q.eval(&eta).expect("eval");
                worst_repr = worst_repr.max(repr.norm());
            }
        }
    }
    outcome(
        worst_norm <= 1e-10 && worst_repr <= 1e-10,
        format!("max | ||K|| - 1 | = {worst_norm:.3e}, max |<Q,K> - Q(eta)| = {worst_repr:.3e} (tol 1e-10)"),
    )
}

fn extremal_profile() -> Outcome {
    let samples = 1_000_000;
    let tol = 5.0 / (samples as f64).sqrt();
    let mut parts = Vec::new();
    let mut pass = true;
    for d in [1, 2] {
        for n in [4, 8] {
            let q = HomPoly::coordinate_power(d, n, 0).expect("poly");
            let profile = LevelProfile::sample(&q, samples, 3, Some(1.0)).expect("profile");
            let gap = profile.sup_distance_to_extremal();
            pass &= gap <= tol;
            parts.push(format!("(d={d},N={n}) {gap:.2e}"));
        }
    }
    outcome(pass, format!("sup |mu - mu_0|: {} (tol {tol:.1e})", parts.join(", ")))
}

fn lieb_solovej() -> Outcome {
    let phis = [
        ConvexFn::xlogx(),
        ConvexFn::power(2.0).expect("phi"),
        ConvexFn::hinge(0.3).expect("phi"),
        ConvexFn::hinge(0.7).expect("phi"),
    ];
    let mut entropy_violations = 0;
    let mut cap_violations = 0;
    let mut min_margin = f64::INFINITY;
    let mut checks = 0;
    for (d, n) in [(1, 4), (2, 4), (2, 8)] {
        let ext: Vec<_> = phis.iter().map(|p| extremal_entropy(n, d, p).expect("extremal")).collect();
        for i in 0..200 {
            let mut rng = substream(4, Purpose::Polynomials, ((d * 100 + n) * 1000 + i) as u64);
            let q = HomPoly::random_unit(d, n, &mut rng).expect("poly");
            let settings = Settings::default().with_seed(i as u64).with_samples(100_000);
            for (phi, e) in phis.iter().zip(&ext) {
                let s = wehrl_entropy(&q, phi, &settings).expect("entropy").estimate;
                let deficit = s.minus(e);
                checks += 1;
                let margin = (deficit.value + 4.0 * deficit.err() + 1e-12) / (1.0 + e.value.abs());
                min_margin = min_margin.min(margin);
                if margin < 0.0 {
                    entropy_violations += 1;
                }
            }
            let eta = random_point(d, &mut rng);
            let omega: f64 = rng.random_range(0.02..0.98);
            let t = wehrl::functionals::cap_level(n, d, omega).expect("level");
            let c = cap_concentration(&q, &eta, t).expect("concentration");
            let bound = extremal_concentration(n, d, cap_measure(n, d, t).expect("measure")).expect("bound");
            checks += 1;
            if c > bound + 1e-12 {
                cap_violations += 1;
            }
        }
    }
    outcome(
        entropy_violations == 0 && cap_violations == 0,
        format!(
            "{checks} checks: {entropy_violations} entropy and {cap_violations} cap violations beyond 4 stderr \
             (min normalized margin {min_margin:.3e})"
        ),
    )
}

fn distance_identity() -> Outcome {
    let mut worst = 0.0f64;
    for (d, n) in [(1, 6), (2, 6)] {
        for i in 0..50 {
            let mut rng = substream(5, Purpose::Polynomials, ((d * 100 + n) * 1000 + i) as u64);
            let q = HomPoly::random_unit(d, n, &mut rng).expect("poly");
            let settings = Settings::default().with_seed(i as u64);
            let t = sup_modulus(&q, &settings).expect("sup").t;
            let (direct, _) = min_kernel_distance_sqr(&q, &settings).expect("distance");
            worst = worst.max((2.0 * (1.0 - t.sqrt()) - direct).abs());
        }
    }
    outcome(worst <= 1e-6, format!("max |2(1 - sqrt T) - min ||Q - K||^2| = {worst:.3e} (tol 1e-6)"))
}

fn sharpness_scaling() -> Outcome {
    let eps = [0.025, 0.05, 0.1, 0.2];
    let r = sharpness_family(2, 6, &eps, &ConvexFn::xlogx(), None, &Settings::default()).expect("sharpness");
    let d_ok = (r.distance_slope - EXPECTED_DISTANCE_SLOPE).abs() <= 0.15;
    let s_ok = (r.deficit_slope - EXPECTED_DEFICIT_SLOPE).abs() <= 0.2;
    let ratio_ok = r.ratio_spread < 2.0;
    outcome(
        d_ok && s_ok && ratio_ok,
        format!(
            "slope(D) = {:.3} (want 1.0 +- 0.15: {}), slope(deficit) = {:.3} (want 2.0 +- 0.2: {}), \
             ratio spread = {:.4} (want < 2: {})",
            r.distance_slope,
            verdict(d_ok),
            r.deficit_slope,
            verdict(s_ok),
            r.ratio_spread,
            verdict(ratio_ok)
        ),
    )
}

fn stability_positivity() -> Outcome {
    let mut cfg = SweepConfig::new(2, 8);
    cfg.generator = Generator::NearKernel {
        eps_min: 0.01,
        eps_max: 0.5,
    };
    cfg.count = 100;
    cfg.omega = vec![0.1];
    cfg.omega_tilde = 0.3;
    cfg.seed = 7;
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, out) in [
        ("concentration", sweep_concentration_stability(&cfg).expect("sweep")),
        ("wehrl xlogx", sweep_wehrl_stability(&cfg).expect("sweep")),
    ] {
        let min_ratio = out
            .records
            .iter()
            .filter_map(|r| r.ratio)
            .fold(f64::INFINITY, f64::min);
        let unresolved_far = out
            .records
            .iter()
            .filter(|r| r.distance_sqr.sqrt() > 0.05)
            .filter(|r| r.deficit <= 4.0 * r.deficit_stderr.unwrap_or(0.0))
            .count();
        let violations = out.records.iter().filter(|r| r.status == Status::Violation).count();
        pass &= min_ratio > 0.0 && unresolved_far == 0 && violations == 0;
        parts.push(format!(
            "{name}: min ratio {min_ratio:.3e}, unresolved at D > 0.05: {unresolved_far}, violations {violations}"
        ));
    }
    outcome(pass, parts.join("; "))
}

fn fock_limit() -> Outcome {
    let one = AffinePoly::from_terms(1, 0, [(vec![0u32], Complex64::new(1.0, 0.0))]).expect("f");
    let r = fock_limit_check(&one, &[64, 256], 1.0, &ConvexFn::xlogx(), &Settings::default().with_seed(8))
        .expect("fock");
    let within = r.points.iter().all(|p| p.within_tolerance);
    let gaps: Vec<String> = r
        .points
        .iter()
        .map(|p| format!("N={} C={:.6} gap {:+.2e}", p.n, p.concentration.value, p.concentration_gap))
        .collect();
    outcome(
        within && r.converging,
        format!(
            "oracle {:.5} +- {:.1e}; {}; converging: {}",
            r.oracle_concentration.value,
            r.oracle_concentration.err(),
            gaps.join(", "),
            r.converging
        ),
    )
}

fn differential_inequality() -> Outcome {
    let mut cfg = SweepConfig::new(2, 5);
    cfg.count = 20;
    cfg.samples = 10_000_000;
    cfg.omega_tilde = 0.3;
    cfg.seed = 9;
    let r = differential_inequality_audit(&cfg).expect("audit");
    let inconclusive = r.items.iter().filter(|i| i.status == AuditStatus::Inconclusive).count();
    let points: usize = r.items.iter().map(|i| i.points).sum();
    outcome(
        r.significant == 0 && r.monotonicity_significant == 0,
        format!(
            "{} polynomials, {points} grid points: {} significant slope violations, {} significant \
             monotonicity violations, {inconclusive} inconclusive items",
            r.items.len(),
            r.significant,
            r.monotonicity_significant
        ),
    )
}

fn states_reduction() -> Outcome {
    let mut worst = 0.0f64;
    let phi = ConvexFn::xlogx();
    for i in 0..50 {
        let d = 1 + i % 2;
        let n = 2 + i % 4;
        let mut rng = substream(10, Purpose::Polynomials, i as u64);
        let q = HomPoly::random_unit(d, n, &mut rng).expect("poly");
        let rho = DensityState::pure(&q).expect("state");
        let settings = Settings::default().with_seed(i as u64);
        for _ in 0..5 {
            let z = random_point(d, &mut rng);
            worst = worst.max((rho.husimi(&z).expect("husimi") - q.eval(&z).expect("eval").norm_sqr()).abs());
        }
        let s_state = state_entropy(&rho, &phi, &settings).expect("entropy").estimate;
        let s_poly = wehrl_entropy(&q, &phi, &settings).expect("entropy").estimate;
        worst = worst.max((s_state.value - s_poly.value).abs());
        let eta = random_point(d, &mut rng);
        let region = RegionSpec::cap_with_measure(eta, n, 0.2).expect("region");
        let c_state = state_concentration(&rho, &region, &settings).expect("concentration").estimate.value;
        let c_poly = concentration(&q, &region, &settings).expect("concentration").estimate.value;
        worst = worst.max((c_state - c_poly).abs());
        let t = sup_modulus(&q, &settings).expect("sup").t;
        let tr = trace_distance_to_coherent(&rho, &settings).expect("trace distance").distance;
        worst = worst.max((tr - 2.0 * (1.0 - t).max(0.0).sqrt()).abs());
    }
    let mut worst_mixed = 0.0f64;
    for (d, n) in [(1, 5), (2, 4), (3, 3)] {
        let rho = DensityState::maximally_mixed(d, n).expect("state");
        let target = 1.0 / binomial_f64(n + d, d);
        let cloud = sample_sphere(d, 100, 11).expect("cloud");
        for z in cloud.iter() {
            let z = normalize(z).expect("point");
            worst_mixed = worst_mixed.max((rho.husimi(&z).expect("husimi") - target).abs());
        }
    }
    outcome(
        worst <= 1e-8 && worst_mixed <= 1e-12,
        format!("rank-1 max deviation {worst:.3e} (tol 1e-8); maximally mixed Husimi deviation {worst_mixed:.3e} (tol 1e-12)"),
    )
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

/// Name, runner and runtime budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, f64);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("inner-product oracle", inner_product_oracle, 60.0),
        ("kernel axioms", kernel_axioms, 60.0),
        ("extremal profile", extremal_profile, 120.0),
        ("Lieb-Solovej suite", lieb_solovej, 600.0),
        ("distance identity", distance_identity, 300.0),
        ("sharpness scaling", sharpness_scaling, 300.0),
        ("stability positivity", stability_positivity, 600.0),
        ("Fock limit", fock_limit, 300.0),
        ("differential-inequality audit", differential_inequality, 600.0),
        ("states reduction", states_reduction, 120.0),
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let number = i + 1;
        if !selected.is_empty() && !selected.contains(&number) {
            continue;
        }
        let start = Instant::now();
        let r = run();
        let elapsed = start.elapsed().as_secs_f64();
        let in_time = elapsed <= *budget;
        let pass = r.pass && in_time;
        let status = if pass { "PASS" } else { "FAIL" };
        if !pass {
            failures += 1;
        }
        let timing = if in_time { "" } else { ", over budget" };
        println!(
            "criterion {number:>2} [{status}] {name}: {} ({elapsed:.1} s of {budget:.0} s{timing})",
            r.detail
        );
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        println!("all acceptance criteria passed");
        ExitCode::SUCCESS
    }
}
