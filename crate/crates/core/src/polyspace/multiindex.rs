use super::combinatorics::{binomial, compositions, multinomial_f64};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Exponent vector `alpha` of a monomial `zeta^alpha` in `d + 1` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    /// `alpha! / |alpha|!`, the squared Bombieri norm of `zeta^alpha`.
    pub fn bombieri_weight(&self) -> f64 {
        1.0 / multinomial_f64(&self.0)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// All exponent vectors with `|alpha| = n` in `d + 1` variables, listed in
/// descending lexicographic order so that `zeta_1^n` is slot 0.
pub fn enumerate_multiindices(d: usize, n: usize) -> Result<Vec<MultiIndex>> {
    let basis = Basis::new(d, n)?;
    Ok((0..basis.len()).map(|i| MultiIndex(basis.exponents(i).to_vec())).collect())
}

/// Dense monomial basis of the homogeneous degree-`n` polynomials in `d + 1`
/// variables, with exponents stored flat and the Bombieri weights cached.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    d: usize,
    n: usize,
    exps: Vec<u32>,
    weights: Vec<f64>,
}

impl Basis {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("dimension d must be at least 1".into()));
        }
        let len = binomial(n + d, d)?;
        let vars = d + 1;
        let bytes = len
            .checked_mul(vars * std::mem::size_of::<u32>())
            .ok_or_else(|| Error::Size(format!("basis for d={d}, N={n} is too large")))?;
        if bytes > (1usize << 31) {
            return Err(Error::Size(format!(
                "basis for d={d}, N={n} has {len} monomials"
            )));
        }
        let mut exps = Vec::with_capacity(len * vars);
        let mut current = vec![0u32; vars];
        fill(&mut exps, &mut current, 0, n);
        debug_assert_eq!(exps.len(), len * vars);
        let weights = exps
            .chunks_exact(vars)
            .map(|a| 1.0 / multinomial_f64(a))
            .collect();
        Ok(Self { d, n, exps, weights })
    }

    pub fn shared(d: usize, n: usize) -> Result<Arc<Self>> {
        Ok(Arc::new(Self::new(d, n)?))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> usize {
        self.d + 1
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn exponents(&self, i: usize) -> &[u32] {
        let v = self.vars();
        &self.exps[i * v..(i + 1) * v]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.exps.chunks_exact(self.vars())
    }

    /// `alpha! / N!` for slot `i`.
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Slot of `alpha` in the enumeration, or `None` when it does not belong.
    pub fn rank(&self, alpha: &[u32]) -> Option<usize> {
        if alpha.len() != self.vars() || alpha.iter().map(|&a| a as usize).sum::<usize>() != self.n {
            return None;
        }
        Some(rank_unchecked(alpha, self.n))
    }
}

fn fill(out: &mut Vec<u32>, current: &mut [u32], pos: usize, remaining: usize) {
    if pos + 1 == current.len() {
        current[pos] = remaining as u32;
        out.extend_from_slice(current);
        return;
    }
    for v in (0..=remaining).rev() {
        current[pos] = v as u32;
        fill(out, current, pos + 1, remaining - v);
    }
}

/// Position of `alpha` (with `|alpha| = n`) in descending lexicographic order.
pub(crate) fn rank_unchecked(alpha: &[u32], n: usize) -> usize {
    let vars = alpha.len();
    let mut idx = 0usize;
    let mut rest = n;
    for (j, &a) in alpha.iter().enumerate().take(vars - 1) {
        let a = a as usize;
        let parts = vars - j - 1;
        for v in (a + 1)..=rest {
            idx += compositions(rest - v, parts);
        }
        rest -= a;
    }
    idx
}
