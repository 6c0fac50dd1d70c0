const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut acc = 0.0;
    while index > 0 {
        acc += (index % b) as f64 * scale;
        index /= b;
        scale *= inv;
    }
    acc
}

/// Point `index` of the Halton sequence in `[0,1)^dims` (at most 16 dimensions).
pub fn halton(index: u64, dims: usize) -> Vec<f64> {
    assert!(dims <= PRIMES.len(), "Halton sequence supports at most 16 dimensions");
    PRIMES[..dims].iter().map(|&p| radical_inverse(index, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_points() {
        assert_eq!(halton(1, 2), vec![0.5, 1.0 / 3.0]);
        assert_eq!(halton(2, 2), vec![0.25, 2.0 / 3.0]);
        assert!((radical_inverse(5, 2) - 0.625).abs() < 1e-16);
    }
}
