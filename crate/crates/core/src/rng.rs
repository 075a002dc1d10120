//! Deterministic random streams for parallel replication.
//!
//! Every (micro-replication, replication) pair owns an independent stream
//! derived from one 64-bit base seed by a counter-based splitting function,
//! so simulation output never depends on thread scheduling. The construction
//! is fixed bit-for-bit:
//!
//! 1. `mix64` is the SplitMix64 finalizer
//!    (`z ^= z>>30; z *= 0xBF58476D1CE4E5B9; z ^= z>>27; z *= 0x94D049BB133111EB; z ^= z>>31`).
//! 2. The stream id is
//!    `mix64(mix64(mix64(base ^ SALT) ^ (micro+1)*M1) ^ (replication+1)*M2)`
//!    with `SALT = 0x9E3779B97F4A7C15`, `M1 = 0xA24BAED4963EE407`,
//!    `M2 = 0x9FB21C651E98DF25` (odd, so distinct counters map to distinct
//!    multiples).
//! 3. The generator is xoshiro256++ whose four state words are the first
//!    four outputs of the SplitMix64 sequence started at the stream id.
//! 4. Uniform variates are `u = ((x >> 11) + 0.5) * 2^-53` from each 64-bit
//!    output `x`, strictly inside (0, 1); normal and exponential variates
//!    are inverse-CDF transforms of `u`.
//!
//! Any implementation following these four rules reproduces our sample
//! paths exactly.

use crate::special::inv_normal_cdf;

const SALT: u64 = 0x9E37_79B9_7F4A_7C15;
const M1: u64 = 0xA24B_AED4_963E_E407;
const M2: u64 = 0x9FB2_1C65_1E98_DF25;

/// SplitMix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the stream for `(base_seed, micro, replication)`.
///
/// Distinct index pairs map to distinct streams over any experiment-scale
/// range (verified exhaustively in the engine tests).
pub fn derive(base_seed: u64, micro: u64, replication: u64) -> RngStream {
    let mut h = mix64(base_seed ^ SALT);
    h = mix64(h ^ micro.wrapping_add(1).wrapping_mul(M1));
    h = mix64(h ^ replication.wrapping_add(1).wrapping_mul(M2));
    RngStream::from_id(h)
}

/// A self-contained xoshiro256++ stream with its 64-bit identifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RngStream {
    id: u64,
    s: [u64; 4],
}

impl RngStream {
    /// Seed the generator state from a 64-bit stream id via SplitMix64.
    pub fn from_id(id: u64) -> Self {
        let mut x = id;
        let mut s = [0u64; 4];
        for w in &mut s {
            x = x.wrapping_add(SALT);
            *w = mix64(x);
        }
        RngStream { id, s }
    }

    /// The 64-bit identifier this stream was derived from.
    pub fn id(&self) -> u64 {
        self.id
    }

    /// Next raw 64-bit output (xoshiro256++).
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[0]
            .wrapping_add(s[3])
            .rotate_left(23)
            .wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform variate strictly inside (0, 1): `((x >> 11) + 0.5) * 2^-53`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Normal variate by inverse-CDF transform of one uniform.
    #[inline]
    pub fn normal(&mut self, mean: f64, sd: f64) -> f64 {
        mean + sd * inv_normal_cdf(self.uniform())
    }

    /// Exponential variate with the given rate, `-ln(1-u)/rate`.
    #[inline]
    pub fn exponential(&mut self, rate: f64) -> f64 {
        -(-self.uniform()).ln_1p() / rate
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn splitmix64_known_answer() {
        // First outputs of Vigna's splitmix64.c started at 0.
        let mut x = 0u64;
        let mut out = [0u64; 3];
        for o in &mut out {
            x = x.wrapping_add(SALT);
            *o = mix64(x);
        }
        assert_eq!(
            out,
            [0xE220_A839_7B1D_CDAF, 0x6E78_9E6A_A1B9_65F4, 0x06C4_5D18_8009_454F]
        );
    }

    #[test]
    fn xoshiro_reference_vector() {
        // Frozen against an independent implementation of the construction
        // described in the module docs (stream id 0x0123456789ABCDEF).
        let mut rng = RngStream::from_id(0x0123_4567_89AB_CDEF);
        let got: Vec<u64> = (0..6).map(|_| rng.next_u64()).collect();
        assert_eq!(
            got,
            vec![
                0xB2F2_A310_E96B_D1C5,
                0xB540_6246_5B95_0493,
                0x87AC_A4A9_6688_14B0,
                0xF13D_2E24_48A9_CFFB,
                0xB7AF_DB42_7F6B_86A2,
                0xC3A6_8C4E_4F50_D0C7,
            ]
        );
        let mut rng = RngStream::from_id(0x0123_4567_89AB_CDEF);
        assert_relative_eq!(rng.uniform(), 0.699_014_846_447_808_98, max_relative = 1e-16);
    }

    #[test]
    fn derive_is_reproducible_and_separates_neighbours() {
        let a = derive(42, 0, 0);
        let b = derive(42, 0, 0);
        assert_eq!(a, b);
        assert_ne!(derive(42, 0, 0), derive(42, 0, 1));
        assert_ne!(derive(42, 0, 0), derive(42, 1, 0));
        assert_ne!(derive(42, 0, 1), derive(42, 1, 0));
    }

    #[test]
    fn uniform_stays_inside_open_interval() {
        let mut rng = derive(7, 0, 0);
        for _ in 0..100_000 {
            let u = rng.uniform();
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn uniform_mean_is_half() {
        let mut rng = derive(11, 0, 0);
        let n = 200_000;
        let mean = (0..n).map(|_| rng.uniform()).sum::<f64>() / n as f64;
        // se = 1/sqrt(12 n) ~ 6.5e-4
        assert!((mean - 0.5).abs() < 4.0 * 6.5e-4, "mean = {mean}");
    }

    #[test]
    fn exponential_moments() {
        let mut rng = derive(13, 0, 0);
        let n = 200_000;
        let mean = (0..n).map(|_| rng.exponential(2.0)).sum::<f64>() / n as f64;
        assert_relative_eq!(mean, 0.5, max_relative = 0.02);
    }
}
