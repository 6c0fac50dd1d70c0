use crate::polyspace::{hermitian, norm};
use crate::Complex64;

/// Options for [`maximize_on_sphere`].
#[derive(Debug, Clone, Copy)]
pub struct AscentOptions {
    /// Stop when the Riemannian gradient norm drops below this.
    pub grad_tol: f64,
    pub max_iter: usize,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self {
            grad_tol: 1e-10,
            max_iter: 5_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AscentResult {
    pub point: Vec<Complex64>,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn tangent(g: &[Complex64], z: &[Complex64]) -> Vec<Complex64> {
    let radial = hermitian(g, z).re;
    g.iter().zip(z).map(|(gi, zi)| gi - zi * radial).collect()
}

fn retract(z: &[Complex64], dir: &[Complex64], step: f64) -> Vec<Complex64> {
    let moved: Vec<Complex64> = z.iter().zip(dir).map(|(a, b)| a + b * step).collect();
    let nrm = norm(&moved);
    moved.into_iter().map(|c| c / nrm).collect()
}

/// Projected gradient ascent of a smooth real function on the unit sphere.
///
/// `f` returns the value and the Euclidean gradient in complex form: the
/// vector `G` with `df = Re(sum conj(G_k) dz_k)`. Steps follow the
/// Barzilai–Borwein rule with Armijo backtracking, followed by renormalization.
pub fn maximize_on_sphere<F>(f: F, start: &[Complex64], opts: AscentOptions) -> AscentResult
where
    F: Fn(&[Complex64]) -> (f64, Vec<Complex64>),
{
    let nrm = norm(start);
    let mut z: Vec<Complex64> = start.iter().map(|c| c / nrm).collect();
    let (mut val, g) = f(&z);
    let mut grad = tangent(&g, &z);
    let mut gnorm = norm(&grad);
    let mut step = 1.0 / (1.0 + gnorm);
    let mut iterations = 0;
    while gnorm >= opts.grad_tol && iterations < opts.max_iter {
        iterations += 1;
        let mut accepted = None;
        let mut trial = step;
        for _ in 0..60 {
            let cand = retract(&z, &grad, trial);
            let (cv, _) = f(&cand);
            if cv >= val + 1e-4 * trial * gnorm * gnorm {
                accepted = Some((cand, cv));
                break;
            }
            trial *= 0.5;
        }
        let Some((cand, cv)) = accepted else {
            // no ascent possible at floating-point resolution
            break;
        };
        let (_, cg) = f(&cand);
        let cgrad = tangent(&cg, &cand);
        // Barzilai–Borwein step for the next iteration
        let s: Vec<Complex64> = cand.iter().zip(&z).map(|(a, b)| a - b).collect();
        let y: Vec<Complex64> = grad.iter().zip(&cgrad).map(|(a, b)| a - b).collect();
        let sy = hermitian(&s, &y).re;
        let ss = hermitian(&s, &s).re;
        step = if sy > 0.0 { (ss / sy).clamp(1e-8, 1e4) } else { (2.0 * trial).min(1e4) };
        z = cand;
        val = cv;
        grad = cgrad;
        gnorm = norm(&grad);
    }
    AscentResult {
        point: z,
        value: val,
        grad_norm: gnorm,
        iterations,
        converged: gnorm < opts.grad_tol,
    }
}
