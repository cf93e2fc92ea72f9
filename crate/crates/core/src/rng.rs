//! Counter-based random streams.
//!
//! Every random word used by the simulators is addressed by
//! `(seed, replicate, step, draw)`. A word is the SplitMix64 finalizer applied
//! to a keyed counter, so any draw can be recomputed in isolation, replicates
//! can be farmed out in any order, and the tree used by the coupling sees
//! exactly the uniforms the direct process would use for its coins.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// Draw slot reserved for the step coin (direct process) or the `U` label (tree).
pub const DRAW_COIN: u32 = 0;
/// Draw slot of the first preferential choice in a step.
pub const DRAW_FIRST: u32 = 1;
/// Draw slot of the second preferential choice in a step.
pub const DRAW_SECOND: u32 = 2;

const DRAWS_PER_STEP: u64 = 4;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Key of one random stream. Cheap to copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    key: u64,
}

impl StreamKey {
    pub fn new(seed: u64) -> Self {
        Self {
            key: mix64(seed ^ 0x5851_f42d_4c95_7f2d),
        }
    }

    /// Independent sub-stream for replicate `r`.
    pub fn replicate(self, r: u64) -> Self {
        Self {
            key: mix64(self.key ^ mix64(r.wrapping_add(1).wrapping_mul(GOLDEN))),
        }
    }

    /// Raw 64-bit word for `(step, draw)`.
    #[inline]
    pub fn word(&self, step: u64, draw: u32) -> u64 {
        let counter = step
            .wrapping_mul(DRAWS_PER_STEP)
            .wrapping_add(draw as u64)
            .wrapping_add(1);
        mix64(self.key.wrapping_add(counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform on `(0, 1]`, so `u <= 0` never holds and `u <= 1` always does.
    #[inline]
    pub fn uniform(&self, step: u64, draw: u32) -> f64 {
        ((self.word(step, draw) >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in `0..n`.
    #[inline]
    pub fn index(&self, step: u64, draw: u32, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.word(step, draw) as u128 * n as u128) >> 64) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_are_reproducible_and_distinct() {
        let a = StreamKey::new(7);
        let b = StreamKey::new(7);
        assert_eq!(a.word(10, 1), b.word(10, 1));
        assert_ne!(a.word(10, 1), a.word(10, 2));
        assert_ne!(a.word(10, 1), a.word(11, 1));
        assert_ne!(a.replicate(0).word(3, 0), a.replicate(1).word(3, 0));
        assert_ne!(StreamKey::new(8).word(10, 1), a.word(10, 1));
    }

    #[test]
    fn uniform_is_in_half_open_unit_interval() {
        let k = StreamKey::new(1);
        let mut sum = 0.0;
        let n = 100_000;
        for s in 0..n {
            let u = k.uniform(s, DRAW_COIN);
            assert!(u > 0.0 && u <= 1.0);
            sum += u;
        }
        let mean = sum / n as f64;
        // sd of the mean is sqrt(1/12/n) ~ 0.0009
        assert!((mean - 0.5).abs() < 0.004, "mean {mean}");
    }

    #[test]
    fn index_covers_range_evenly() {
        let k = StreamKey::new(99).replicate(3);
        let mut counts = [0u32; 6];
        let n = 600_000;
        for s in 0..n {
            counts[k.index(s, DRAW_FIRST, 6)] += 1;
        }
        let expected = n as f64 / 6.0;
        let sd = (n as f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
        for c in counts {
            assert!((c as f64 - expected).abs() < 4.0 * sd, "{counts:?}");
        }
    }
}
