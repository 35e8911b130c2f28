//! Deterministic pseudo-random number generation.
//!
//! All randomness in this crate flows through [`RngState`], a xoshiro256++
//! generator seeded from a single `u64` via SplitMix64 expansion. The stream
//! produced by a given seed is identical on every platform, which is what
//! makes simulation output byte-reproducible.
//!
//! Parallel work derives independent streams with [`RngState::child`]:
//! `child(i)` is a function of the parent *seed* and the stream index only,
//! so it does not matter how much of the parent stream has been consumed.

/// SplitMix64 finalizer. Used for seed expansion and stream splitting.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A seeded xoshiro256++ generator.
///
/// Identical seeds produce identical streams on all platforms. Uniform
/// deviates lie strictly inside (0, 1).
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    s: [u64; 4],
}

impl RngState {
    /// Creates a generator from a 64-bit seed.
    pub fn new(seed: u64) -> Self {
        let mut s = [0u64; 4];
        let mut z = seed;
        for slot in &mut s {
            z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
            *slot = mix64(z);
        }
        // xoshiro256++ requires a nonzero state.
        if s == [0, 0, 0, 0] {
            s[0] = 0x9E37_79B9_7F4A_7C15;
        }
        Self { seed, s }
    }

    /// The seed this generator was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derives an independent child stream.
    ///
    /// The child seed is `mix64(parent_seed ^ mix64(index))`; it depends only
    /// on the parent seed and the stream index, never on the parent's
    /// current position.
    pub fn child(&self, index: u64) -> Self {
        Self::new(mix64(self.seed ^ mix64(index)))
    }

    /// Next raw 64-bit output.
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

    /// Uniform deviate in the open interval (0, 1).
    ///
    /// Maps the top 53 bits to `(k + 0.5) * 2^-53`, so 0.0 and 1.0 are
    /// unreachable.
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal deviate via Box-Muller (cosine branch).
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_seeds_give_identical_streams() {
        let mut a = RngState::new(42);
        let mut b = RngState::new(42);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn different_seeds_diverge() {
        let mut a = RngState::new(1);
        let mut b = RngState::new(2);
        let same = (0..100).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn uniform_is_strictly_inside_unit_interval() {
        let mut rng = RngState::new(7);
        for _ in 0..100_000 {
            let u = rng.uniform();
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn uniform_mean_is_near_half() {
        let mut rng = RngState::new(11);
        let n = 100_000;
        let mean = (0..n).map(|_| rng.uniform()).sum::<f64>() / n as f64;
        // 3 standard errors of the mean of U(0,1).
        let se = (1.0 / 12.0f64).sqrt() / (n as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn normal_moments() {
        let mut rng = RngState::new(13);
        let n = 200_000;
        let draws: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 3.0 / (n as f64).sqrt(), "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn child_streams_ignore_parent_position() {
        let parent_fresh = RngState::new(99);
        let mut parent_used = RngState::new(99);
        for _ in 0..57 {
            parent_used.next_u64();
        }
        let mut c1 = parent_fresh.child(3);
        let mut c2 = parent_used.child(3);
        for _ in 0..100 {
            assert_eq!(c1.next_u64(), c2.next_u64());
        }
    }

    #[test]
    fn sibling_streams_have_low_correlation() {
        // First draw of consecutive child streams should look independent.
        let parent = RngState::new(2024);
        let firsts: Vec<f64> = (0..1000).map(|j| parent.child(j).uniform()).collect();
        let x = &firsts[..999];
        let y = &firsts[1..];
        let mx = x.iter().sum::<f64>() / x.len() as f64;
        let my = y.iter().sum::<f64>() / y.len() as f64;
        let cov = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>();
        let vx = x.iter().map(|a| (a - mx) * (a - mx)).sum::<f64>();
        let vy = y.iter().map(|b| (b - my) * (b - my)).sum::<f64>();
        let r = cov / (vx * vy).sqrt();
        assert!(r.abs() < 0.1, "lag-1 correlation {r}");
    }
}
