//! Density operators on the polynomial space, their Husimi functions, operator
//! entropy and concentration, and trace distance to coherent projectors.

use crate::estimate::Estimate;
use crate::functionals::{
    cap_concentration, check_normalized, field_entropy, modulus_and_gradient, ConcentrationResult, ConvexFn,
    EntropyResult, Method, ModulusField, RegionSpec, Settings,
};
use crate::optimize::{maximize_on_sphere, nelder_mead, AscentOptions, NelderMeadOptions};
use crate::polyspace::{binomial_f64, check_unit, check_unitary, hermitian, normalize, reproducing_kernel, Basis, HomPoly};
use crate::quadrature::{map_chunks_for, mc_mean, CloudKind};
use crate::rng::Purpose;
use crate::{Complex64, Error, Result};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::sync::Arc;

/// Tolerance for hermiticity, unit trace and negative eigenvalues.
pub const STATE_TOL: f64 = 1e-12;

/// Eigenvalues at or below this level are left out of the spectral components
/// (they stay in the matrix), so a numerically rank-one state has rank one.
pub const RANK_TOL: f64 = 1e-14;

/// A positive semidefinite unit-trace operator in the orthonormal monomial basis
/// `sqrt(N!/alpha!) zeta^alpha`, with its spectral decomposition.
#[derive(Debug, Clone)]
pub struct DensityState {
    basis: Arc<Basis>,
    matrix: DMatrix<Complex64>,
    eigenvalues: Vec<f64>,
    /// Eigenpolynomials `Q_j` with eigenvalue `lambda_j > RANK_TOL`.
    components: Vec<(f64, HomPoly)>,
    clipped: usize,
}

impl DensityState {
    /// Validates a matrix and caches its eigen-decomposition. Eigenvalues in
    /// `[-1e-12, 0)` are clipped to zero.
    pub fn from_matrix(d: usize, n: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let basis = Basis::shared(d, n)?;
        let dim = basis.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Shape(format!(
                "state matrix is {}x{}, expected {dim}x{dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Domain("state matrix has non-finite entries".into()));
        }
        let asym = (&matrix - matrix.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
        if asym > STATE_TOL {
            return Err(Error::Domain(format!("state matrix is not Hermitian (deviation {asym:e})")));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::Domain(format!("state trace is {trace}, expected 1")));
        }
        let hermitian_part = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = hermitian_part.symmetric_eigen();
        let mut eigenvalues = Vec::with_capacity(dim);
        let mut components = Vec::new();
        let mut clipped = 0;
        for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda < -STATE_TOL {
                return Err(Error::Domain(format!("state has negative eigenvalue {lambda:e}")));
            }
            if lambda < 0.0 {
                clipped += 1;
                eigenvalues.push(0.0);
                continue;
            }
            eigenvalues.push(lambda);
            if lambda > RANK_TOL {
                let v: Vec<Complex64> = eig.eigenvectors.column(j).iter().copied().collect();
                components.push((lambda, HomPoly::from_onb_coords(d, n, &v)?));
            }
        }
        if clipped > 0 {
            log::warn!("clipped {clipped} slightly negative eigenvalue(s) of a density state to zero");
        }
        Ok(Self {
            basis,
            matrix,
            eigenvalues,
            components,
            clipped,
        })
    }

    /// The rank-one state `|Q><Q|` of a unit-norm polynomial.
    pub fn pure(q: &HomPoly) -> Result<Self> {
        check_normalized(q)?;
        let c = nalgebra::DVector::from_vec(q.onb_coords());
        Self::from_matrix(q.dim(), q.degree(), &c * c.adjoint())
    }

    /// `I / dim`.
    pub fn maximally_mixed(d: usize, n: usize) -> Result<Self> {
        let dim = Basis::shared(d, n)?.len();
        Self::from_matrix(d, n, DMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0))
    }

    /// `sum_i w_i rho_i` with nonnegative weights summing to one.
    pub fn mixture(weights: &[f64], states: &[DensityState]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::Shape("mixture needs one weight per state".into()));
        }
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|&w| w < 0.0) || (total - 1.0).abs() > STATE_TOL {
            return Err(Error::Domain("mixture weights must be nonnegative and sum to 1".into()));
        }
        let (d, n) = (states[0].dim(), states[0].degree());
        if states.iter().any(|s| s.dim() != d || s.degree() != n) {
            return Err(Error::Shape("mixture of states on different spaces".into()));
        }
        let mut m = DMatrix::zeros(states[0].size(), states[0].size());
        for (w, s) in weights.iter().zip(states) {
            m += &s.matrix * Complex64::new(*w, 0.0);
        }
        Self::from_matrix(d, n, m)
    }

    /// The coherent projector `pi_eta` as a state.
    pub fn coherent(n: usize, eta: &[Complex64]) -> Result<Self> {
        CoherentProjector::new(n, eta)?.to_state()
    }

    /// Random state `sum_j p_j |Q_j><Q_j|` with `rank` Gaussian columns (a
    /// Wishart matrix normalized to unit trace).
    pub fn random<R: rand::Rng + ?Sized>(d: usize, n: usize, rank: usize, rng: &mut R) -> Result<Self> {
        let dim = Basis::shared(d, n)?.len();
        if rank == 0 {
            return Err(Error::Domain("rank must be at least 1".into()));
        }
        let g = DMatrix::from_fn(dim, rank, |_, _| {
            Complex64::new(rng.sample(rand_distr::StandardNormal), rng.sample(rand_distr::StandardNormal))
        });
        let mut m = &g * g.adjoint();
        let tr = m.trace().re;
        m /= Complex64::new(tr, 0.0);
        let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        Self::from_matrix(d, n, m)
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    /// Dimension `binom(N+d, d)` of the polynomial space.
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn components(&self) -> &[(f64, HomPoly)] {
        &self.components
    }

    /// Number of eigenvalues above `RANK_TOL`.
    pub fn rank(&self) -> usize {
        self.components.len()
    }

    /// Number of eigenvalues clipped to zero at construction.
    pub fn clipped(&self) -> usize {
        self.clipped
    }

    /// `u_rho(zeta) = sum_j lambda_j |Q_j(zeta)|^2 = <K_zeta, rho K_zeta>`.
    pub fn husimi(&self, zeta: &[Complex64]) -> Result<f64> {
        if zeta.len() != self.dim() + 1 {
            return Err(Error::Shape(format!("point has {} components, expected {}", zeta.len(), self.dim() + 1)));
        }
        check_unit(zeta, 1e-10)?;
        Ok(self.husimi_with(zeta, &mut Vec::new()).clamp(0.0, 1.0))
    }

    pub fn husimi_with(&self, zeta: &[Complex64], scratch: &mut Vec<Complex64>) -> f64 {
        self.components
            .iter()
            .map(|(l, q)| l * q.modulus_sqr_with(zeta, scratch))
            .sum()
    }

    /// `U_R rho U_R^*`, where `U_R Q = Q o R^*`.
    pub fn conjugate(&self, r: &DMatrix<Complex64>) -> Result<Self> {
        check_unitary(r, 1e-12)?;
        let mut m = DMatrix::zeros(self.size(), self.size());
        for (l, q) in &self.components {
            let c = nalgebra::DVector::from_vec(q.rotate(r)?.onb_coords());
            m += (&c * c.adjoint()) * Complex64::new(*l, 0.0);
        }
        let tr = m.trace().re;
        m /= Complex64::new(tr, 0.0);
        Self::from_matrix(self.dim(), self.degree(), (&m + m.adjoint()) * Complex64::new(0.5, 0.0))
    }

    pub fn to_json(&self) -> Result<String> {
        let file = StateFile {
            d: self.dim(),
            n: self.degree(),
            matrix: (0..self.size())
                .map(|i| {
                    (0..self.size())
                        .map(|j| Entry {
                            re: self.matrix[(i, j)].re,
                            im: self.matrix[(i, j)].im,
                        })
                        .collect()
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        if file.d == 0 {
            return Err(Error::Parse {
                field: "d".into(),
                message: "d must be at least 1".into(),
            });
        }
        let dim = Basis::shared(file.d, file.n)?.len();
        if file.matrix.len() != dim {
            return Err(Error::Parse {
                field: "matrix".into(),
                message: format!("expected {dim} rows, got {}", file.matrix.len()),
            });
        }
        for (i, row) in file.matrix.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Parse {
                    field: format!("matrix[{i}]"),
                    message: format!("expected {dim} entries, got {}", row.len()),
                });
            }
        }
        let m = DMatrix::from_fn(dim, dim, |i, j| {
            let e = &file.matrix[i][j];
            Complex64::new(e.re, e.im)
        });
        Self::from_matrix(file.d, file.n, m)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_json()?)?)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    d: usize,
    #[serde(rename = "N")]
    n: usize,
    matrix: Vec<Vec<Entry>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    re: f64,
    im: f64,
}

impl ModulusField for DensityState {
    fn degree(&self) -> usize {
        self.basis.degree()
    }

    fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn value_with(&self, z: &[Complex64], scratch: &mut Vec<Complex64>) -> f64 {
        self.husimi_with(z, scratch)
    }

    fn is_binary(&self) -> bool {
        self.components.iter().all(|(_, q)| crate::functionals::is_binary(q))
    }
}

/// Rank-one projector onto the normalized kernel `K_N(., eta)`.
#[derive(Debug, Clone)]
pub struct CoherentProjector {
    center: Vec<Complex64>,
    n: usize,
    /// ONB coordinates `conj(e_alpha(eta))` of the kernel.
    coords: nalgebra::DVector<Complex64>,
}

impl CoherentProjector {
    pub fn new(n: usize, eta: &[Complex64]) -> Result<Self> {
        if eta.len() < 2 {
            return Err(Error::Domain("cap center needs at least two components".into()));
        }
        let k = reproducing_kernel(eta.len() - 1, n, eta)?;
        Ok(Self {
            center: eta.to_vec(),
            n,
            coords: nalgebra::DVector::from_vec(k.onb_coords()),
        })
    }

    pub fn center(&self) -> &[Complex64] {
        &self.center
    }

    /// `(pi_eta)_{alpha beta} = conj(e_alpha(eta)) e_beta(eta)`.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        &self.coords * self.coords.adjoint()
    }

    pub fn to_state(&self) -> Result<DensityState> {
        DensityState::from_matrix(self.center.len() - 1, self.n, self.matrix())
    }
}

/// Trace norm `sum |eig|` of a Hermitian matrix.
pub fn trace_norm(m: &DMatrix<Complex64>) -> f64 {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().map(|l| l.abs()).sum()
}

/// `||rho - c c^H||_1` for a unit vector `c`, from the spectrum `(lambda_j, v_j)`
/// of `rho` (positive eigenvalues only). The difference has trace zero and a
/// single negative eigenvalue `mu`, so the norm is `-2 mu`; `mu` is the root in
/// `[-1, 0]` of `sum_j w_j/(lambda_j - mu) - w_0/mu = 1` with `w_j = |<v_j, c>|^2`
/// and `w_0 = 1 - sum_j w_j` the weight on the kernel of `rho`.
fn projector_trace_distance(spectrum: &[(f64, nalgebra::DVector<Complex64>)], c: &nalgebra::DVector<Complex64>) -> f64 {
    let weights: Vec<(f64, f64)> = spectrum.iter().map(|(l, v)| (*l, v.dotc(c).norm_sqr())).collect();
    let w0 = (1.0 - weights.iter().map(|w| w.1).sum::<f64>()).max(0.0);
    let g = |mu: f64| weights.iter().map(|(l, w)| w / (l - mu)).sum::<f64>() - w0 / mu - 1.0;
    let (mut lo, mut hi) = (-1.0f64, 0.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (-(lo + hi)).clamp(0.0, 2.0)
}

/// `S_{N,Phi}(rho) = -binom(N+d, d) int Phi(u_rho) d sigma`.
pub fn state_entropy(rho: &DensityState, phi: &ConvexFn, settings: &Settings) -> Result<EntropyResult> {
    field_entropy(rho, phi, settings)
}

/// `C_{N,Omega}(rho) = int_Omega u_rho / int u_rho`: exact for caps by spectral
/// decomposition, Monte Carlo otherwise.
pub fn state_concentration(rho: &DensityState, region: &RegionSpec, settings: &Settings) -> Result<ConcentrationResult> {
    let n = rho.degree();
    let d = rho.dim();
    let m = region.measure(n)?;
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::Domain(format!("region measure must lie in (0, 1), got {m}")));
    }
    match region {
        RegionSpec::Cap { eta, t } | RegionSpec::CapComplement { eta, t } => {
            let mut c = 0.0;
            for (l, q) in rho.components() {
                c += l * cap_concentration(q, eta, *t)?;
            }
            let value = if matches!(region, RegionSpec::Cap { .. }) { c } else { 1.0 - c };
            Ok(ConcentrationResult {
                estimate: Estimate::exact(value.clamp(0.0, 1.0)),
                method: Method::ClosedForm,
                measure: m,
            })
        }
        _ => {
            let resolved = region.resolve(n, d, settings)?;
            let binom = binomial_f64(n + d, d);
            let est = mc_mean(CloudKind::Sphere, d, settings.samples, settings.seed, Vec::new, |s, z| {
                if resolved.contains(z, s) {
                    rho.husimi_with(z, s)
                } else {
                    0.0
                }
            })?;
            Ok(ConcentrationResult {
                estimate: Estimate {
                    value: (est.value * binom).clamp(0.0, 1.0),
                    stderr: est.stderr.map(|s| s * binom),
                },
                method: Method::MonteCarlo {
                    samples: settings.samples,
                    seed: settings.seed,
                },
                measure: resolved.measure(),
            })
        }
    }
}

/// Minimal trace distance to a coherent projector.
#[derive(Debug, Clone, Serialize)]
pub struct TraceDistance {
    /// `min_eta ||rho - pi_eta||_1`, in `[0, 2]`.
    pub distance: f64,
    pub center: Vec<Complex64>,
    /// False when no local search met its tolerance (the best value is still reported).
    pub converged: bool,
}

/// Largest Husimi values found by multistart ascent, as seeds for the trace-distance search.
fn husimi_maxima(rho: &DensityState, settings: &Settings, keep: usize) -> Result<Vec<Vec<Complex64>>> {
    let d = rho.dim();
    let vars = d + 1;
    let grads: Vec<Vec<HomPoly>> = rho
        .components()
        .iter()
        .map(|(_, q)| (0..vars).map(|k| q.derivative(k)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let pool = (32 * settings.starts).max(1024);
    let mut scored: Vec<(f64, Vec<Complex64>)> =
        map_chunks_for(CloudKind::Sphere, Purpose::Multistart, d, pool, settings.seed, |_, pts| {
            let mut scratch = Vec::new();
            pts.chunks_exact(vars)
                .map(|z| (rho.husimi_with(z, &mut scratch), z.to_vec()))
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let field = |z: &[Complex64]| {
        let mut value = 0.0;
        let mut grad = vec![Complex64::new(0.0, 0.0); vars];
        for ((l, q), g) in rho.components().iter().zip(&grads) {
            let (v, gq) = modulus_and_gradient(q, g, z);
            value += l * v;
            grad.iter_mut().zip(gq).for_each(|(a, b)| *a += b * *l);
        }
        (value, grad)
    };
    let mut results: Vec<_> = scored
        .into_par_iter()
        .take(settings.starts.max(1))
        .map(|(_, z)| maximize_on_sphere(field, &z, AscentOptions::default()))
        .collect();
    results.sort_by(|a, b| b.value.total_cmp(&a.value));
    let mut seeds: Vec<Vec<Complex64>> = Vec::new();
    for r in results {
        if seeds.iter().all(|s| hermitian(s, &r.point).norm_sqr() < 1.0 - 1e-6) {
            seeds.push(r.point);
        }
        if seeds.len() == keep {
            break;
        }
    }
    Ok(seeds)
}

/// Largest value of the Husimi function found by multistart ascent, with its location.
pub fn husimi_maximum(rho: &DensityState, settings: &Settings) -> Result<(f64, Vec<Complex64>)> {
    let seeds = husimi_maxima(rho, settings, 1)?;
    let eta = seeds.into_iter().next().ok_or_else(|| Error::NonConvergence {
        message: "no Husimi maximum found".into(),
        best: f64::NAN,
    })?;
    Ok((rho.husimi(&eta)?, eta))
}

/// `D_N(rho) = min_eta ||rho - pi_eta||_1` by Nelder–Mead over `eta`, seeded
/// at the largest local maxima of the Husimi function.
pub fn trace_distance_to_coherent(rho: &DensityState, settings: &Settings) -> Result<TraceDistance> {
    let n = rho.degree();
    let seeds = husimi_maxima(rho, settings, 4)?;
    let spectrum: Vec<(f64, nalgebra::DVector<Complex64>)> = rho
        .components()
        .iter()
        .map(|(l, q)| (*l, nalgebra::DVector::from_vec(q.onb_coords())))
        .collect();
    let objective = |x: &[f64]| -> f64 {
        let z: Vec<Complex64> = x.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        match normalize(&z).and_then(|eta| CoherentProjector::new(n, &eta)) {
            Ok(p) => projector_trace_distance(&spectrum, &p.coords),
            Err(_) => f64::INFINITY,
        }
    };
    let opts = NelderMeadOptions {
        step: 0.05,
        max_evals: 20_000,
        ftol: 1e-14,
        xtol: 1e-10,
    };
    let mut best: Option<(f64, Vec<f64>, bool)> = None;
    for seed in &seeds {
        let x0: Vec<f64> = seed.iter().flat_map(|c| [c.re, c.im]).collect();
        let r = nelder_mead(objective, &x0, opts);
        if best.as_ref().is_none_or(|(v, _, _)| r.value < *v) {
            best = Some((r.value, r.x, r.converged));
        }
    }
    let (value, x, converged) = best.ok_or_else(|| Error::NonConvergence {
        message: "no Husimi maximum found".into(),
        best: f64::NAN,
    })?;
    if !converged {
        log::warn!("trace-distance search did not converge; reporting best value {value}");
    }
    let z: Vec<Complex64> = x.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
    Ok(TraceDistance {
        distance: value.clamp(0.0, 2.0),
        center: normalize(&z)?,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Purpose};

    #[test]
    fn coherent_projector_is_a_projection() {
        let eta = normalize(&[Complex64::new(0.3, 0.1), Complex64::new(-0.5, 0.2), Complex64::new(0.1, 0.7)]).unwrap();
        let p = CoherentProjector::new(3, &eta).unwrap().matrix();
        assert!((&p * &p - &p).norm() < 1e-10);
        assert!((p.trace().re - 1.0).abs() < 1e-12);
        let rho = DensityState::coherent(3, &eta).unwrap();
        assert!((rho.husimi(&eta).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn secular_trace_distance_matches_eigenvalues() {
        let mut rng = substream(43, Purpose::Polynomials, 0);
        for rank in 1..=4 {
            let rho = DensityState::random(2, 2, rank, &mut rng).unwrap();
            let spectrum: Vec<_> = rho
                .components()
                .iter()
                .map(|(l, q)| (*l, nalgebra::DVector::from_vec(q.onb_coords())))
                .collect();
            let eta = normalize(&[Complex64::new(0.2, 0.4), Complex64::new(-0.5, 0.1), Complex64::new(0.3, -0.6)]).unwrap();
            let p = CoherentProjector::new(2, &eta).unwrap();
            let direct = trace_norm(&(rho.matrix() - p.matrix()));
            let fast = projector_trace_distance(&spectrum, &p.coords);
            assert!((direct - fast).abs() < 1e-12, "rank {rank}: {direct} vs {fast}");
        }
        let rho = DensityState::coherent(2, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        let spectrum: Vec<_> = rho
            .components()
            .iter()
            .map(|(l, q)| (*l, nalgebra::DVector::from_vec(q.onb_coords())))
            .collect();
        let p = CoherentProjector::new(2, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        assert!(projector_trace_distance(&spectrum, &p.coords) < 1e-12);
    }

    #[test]
    fn maximally_mixed_husimi_is_constant() {
        let rho = DensityState::maximally_mixed(2, 3).unwrap();
        let z = normalize(&[Complex64::new(0.3, 0.1), Complex64::new(-0.5, 0.2), Complex64::new(0.1, 0.7)]).unwrap();
        assert!((rho.husimi(&z).unwrap() - 0.1).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let mut rng = substream(41, Purpose::Polynomials, 0);
        let rho = DensityState::random(1, 3, 2, &mut rng).unwrap();
        let back = DensityState::from_json(&rho.to_json().unwrap()).unwrap();
        assert_eq!(back.matrix(), rho.matrix());
        assert!(matches!(
            DensityState::from_json(r#"{"d":1,"N":1,"matrix":[[{"re":1,"im":0}]]}"#),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn rejects_invalid_matrices() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.5, 0.0),
            Complex64::new(-0.5, 0.0),
        ]));
        assert!(matches!(DensityState::from_matrix(1, 1, m), Err(Error::Domain(_))));
    }

    #[test]
    fn trace_distance_examples() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let s = Settings::default();
        let eta = normalize(&[Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
        let r = trace_distance_to_coherent(&DensityState::coherent(3, &eta).unwrap(), &s).unwrap();
        assert!(r.distance < 1e-6, "{}", r.distance);
        assert!(hermitian(&r.center, &eta).norm_sqr() > 1.0 - 1e-8);
        let a = DensityState::coherent(3, &[one, zero]).unwrap();
        let b = DensityState::coherent(3, &[zero, one]).unwrap();
        let mix = DensityState::mixture(&[0.5, 0.5], &[a, b]).unwrap();
        let r = trace_distance_to_coherent(&mix, &s).unwrap();
        assert!((r.distance - 1.0).abs() < 1e-6, "{}", r.distance);
    }
}
