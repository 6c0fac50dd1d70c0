//! Seeded, splittable random streams.
//!
//! Every stream is a ChaCha8 generator keyed by a mixed `(seed, purpose)` pair;
//! the ChaCha stream id selects the chunk or item. A chunk therefore produces
//! the same numbers no matter which thread draws it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Samples drawn per Monte Carlo chunk.
pub const CHUNK: usize = 1 << 15;

/// Purpose tags keep streams used for different jobs disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    SphereCloud,
    FubiniStudyCloud,
    GaussianCloud,
    Multistart,
    Polynomials,
    Regions,
    Optimizer,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::SphereCloud => 0x5350_4845_5245,
            Purpose::FubiniStudyCloud => 0x4655_4249_4e49,
            Purpose::GaussianCloud => 0x4741_5553_5353,
            Purpose::Multistart => 0x4d55_4c54_4953,
            Purpose::Polynomials => 0x504f_4c59_4e4f,
            Purpose::Regions => 0x5245_4749_4f4e,
            Purpose::Optimizer => 0x4f50_5449_4d49,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Substream `index` of the stream identified by `(seed, purpose)`.
pub fn substream(seed: u64, purpose: Purpose, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ purpose.tag()));
    rng.set_stream(index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn substreams_are_reproducible_and_distinct() {
        let a: u64 = substream(7, Purpose::SphereCloud, 3).random();
        let b: u64 = substream(7, Purpose::SphereCloud, 3).random();
        let c: u64 = substream(7, Purpose::SphereCloud, 4).random();
        let e: u64 = substream(7, Purpose::Polynomials, 3).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, e);
    }
}
