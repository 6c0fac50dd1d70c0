use crate::estimate::{Estimate, MeanAccumulator};
use crate::rng::{substream, Purpose, CHUNK};
use crate::{Complex64, Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Which distribution a cloud was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudKind {
    /// Uniform on the unit sphere of `C^{d+1}`.
    Sphere,
    /// Fubini–Study probability measure on `C^d`.
    FubiniStudy,
    /// Gaussian `e^{-pi |z|^2} dz` on `C^d`.
    Gaussian,
}

impl CloudKind {
    fn purpose(self) -> Purpose {
        match self {
            CloudKind::Sphere => Purpose::SphereCloud,
            CloudKind::FubiniStudy => Purpose::FubiniStudyCloud,
            CloudKind::Gaussian => Purpose::GaussianCloud,
        }
    }

    /// Number of complex components per point for dimension `d`.
    pub fn width(self, d: usize) -> usize {
        match self {
            CloudKind::Sphere => d + 1,
            _ => d,
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn draw_point(kind: CloudKind, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Complex64>) {
    match kind {
        CloudKind::Sphere => loop {
            let start = out.len();
            out.extend((0..=d).map(|_| gaussian(rng)));
            let nrm = out[start..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if nrm > 0.0 {
                out[start..].iter_mut().for_each(|c| *c /= nrm);
                return;
            }
            out.truncate(start);
        },
        CloudKind::FubiniStudy => loop {
            // the projection z = zeta'/zeta_1 is scale invariant, so the
            // Gaussian vector need not be normalized
            let z1 = gaussian(rng);
            let rest: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
            if z1.norm_sqr() > 0.0 {
                out.extend(rest.iter().map(|c| c / z1));
                return;
            }
        },
        CloudKind::Gaussian => {
            // density e^{-pi|z|^2}: each real coordinate has variance 1/(2 pi)
            let s = (0.5 / std::f64::consts::PI).sqrt();
            out.extend((0..d).map(|_| gaussian(rng) * s));
        }
    }
}

fn chunk_points(kind: CloudKind, purpose: Purpose, d: usize, seed: u64, chunk: usize, count: usize) -> Vec<Complex64> {
    let mut rng = substream(seed, purpose, chunk as u64);
    let mut out = Vec::with_capacity(count * kind.width(d));
    for _ in 0..count {
        draw_point(kind, d, &mut rng, &mut out);
    }
    out
}

/// Draws `n` points in fixed-size chunks and applies `f(chunk_index, points)`
/// to each chunk (points are laid out flat, `kind.width(d)` per point).
/// Results come back in chunk order, independent of scheduling.
pub fn map_chunks<T, F>(kind: CloudKind, d: usize, n: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &[Complex64]) -> T + Sync,
{
    map_chunks_for(kind, kind.purpose(), d, n, seed, f)
}

/// [`map_chunks`] drawing from the random stream reserved for `purpose`.
pub fn map_chunks_for<T, F>(kind: CloudKind, purpose: Purpose, d: usize, n: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &[Complex64]) -> T + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = CHUNK.min(n - c * CHUNK);
            let pts = chunk_points(kind, purpose, d, seed, c, count);
            f(c, &pts)
        })
        .collect()
}

/// Monte Carlo mean of `f` over `n` seeded points, with per-chunk scratch state.
pub fn mc_mean<S, I, F>(kind: CloudKind, d: usize, n: usize, seed: u64, init: I, f: F) -> Result<Estimate>
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, &[Complex64]) -> f64 + Sync,
{
    mc_mean_for(kind, kind.purpose(), d, n, seed, init, f)
}

/// [`mc_mean`] drawing from the random stream reserved for `purpose`.
pub fn mc_mean_for<S, I, F>(
    kind: CloudKind,
    purpose: Purpose,
    d: usize,
    n: usize,
    seed: u64,
    init: I,
    f: F,
) -> Result<Estimate>
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, &[Complex64]) -> f64 + Sync,
{
    if n == 0 {
        return Err(Error::Domain("Monte Carlo needs at least one sample".into()));
    }
    let w = kind.width(d);
    let parts = map_chunks_for(kind, purpose, d, n, seed, |c, pts| {
        let mut state = init();
        let mut acc = MeanAccumulator::new();
        for (i, z) in pts.chunks_exact(w).enumerate() {
            let v = f(&mut state, z);
            if !v.is_finite() {
                return Err(Error::Evaluation {
                    node: c * CHUNK + i,
                    message: format!("integrand is not finite at sample {:?}", z),
                });
            }
            acc.push(v);
        }
        Ok(acc)
    });
    let mut total = MeanAccumulator::new();
    for p in parts {
        total.merge(&p?);
    }
    Ok(total.estimate())
}

/// A stored, seeded point cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleCloud {
    kind: CloudKind,
    d: usize,
    seed: u64,
    count: usize,
    points: Vec<Complex64>,
}

impl SampleCloud {
    pub fn generate(kind: CloudKind, d: usize, n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a sample cloud needs at least one point".into()));
        }
        if d == 0 {
            return Err(Error::Domain("dimension d must be at least 1".into()));
        }
        let bytes = n.saturating_mul(kind.width(d)).saturating_mul(16);
        if bytes > 1 << 32 {
            return Err(Error::Size(format!("sample cloud of {n} points needs {bytes} bytes")));
        }
        let points = map_chunks(kind, d, n, seed, |_, pts| pts.to_vec())
            .into_iter()
            .flatten()
            .collect();
        Ok(Self {
            kind,
            d,
            seed,
            count: n,
            points,
        })
    }

    pub fn kind(&self) -> CloudKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn point(&self, i: usize) -> &[Complex64] {
        let w = self.kind.width(self.d);
        &self.points[i * w..(i + 1) * w]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Complex64]> {
        self.points.chunks_exact(self.kind.width(self.d))
    }

    /// Parallel map over the points in order.
    pub fn map<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&[Complex64]) -> T + Sync,
    {
        self.points
            .par_chunks_exact(self.kind.width(self.d))
            .map(&f)
            .collect()
    }
}

/// `n` uniform points on the unit sphere of `C^{d+1}`.
pub fn sample_sphere(d: usize, n: usize, seed: u64) -> Result<SampleCloud> {
    SampleCloud::generate(CloudKind::Sphere, d, n, seed)
}

/// `n` points of `C^d` distributed by the Fubini–Study probability measure.
pub fn sample_fubini_study(n: usize, seed: u64, d: usize) -> Result<SampleCloud> {
    SampleCloud::generate(CloudKind::FubiniStudy, d, n, seed)
}
