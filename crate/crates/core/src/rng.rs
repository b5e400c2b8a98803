//! Seeded pseudo-random streams.
//!
//! SplitMix64 derives seeds, xoshiro256** produces the draws. Both follow the
//! reference algorithms by Vigna, so streams are bit-reproducible across
//! platforms and implementations. Uniform integers use rejection sampling.

use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

/// xoshiro256** 1.0.
#[derive(Clone, Debug)]
pub struct Xoshiro256StarStar {
    s: [u64; 4],
}

impl Xoshiro256StarStar {
    /// Expand a 64-bit seed into the 256-bit state with SplitMix64.
    pub fn seed_from_u64(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        let s = [sm.next_u64(), sm.next_u64(), sm.next_u64(), sm.next_u64()];
        Self { s }
    }

    pub fn from_state(s: [u64; 4]) -> Self {
        Self { s }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform on `[0, span)` for `1 <= span <= 2^64`.
    ///
    /// Draws falling in the incomplete top block of `2^64 mod span` values are
    /// rejected, so every outcome is equally likely.
    pub fn below(&mut self, span: u128) -> u64 {
        assert!((1..=1u128 << 64).contains(&span), "span out of range");
        if span == 1u128 << 64 {
            return self.next_u64();
        }
        let span = span as u64;
        let reject_from = u64::MAX - (u64::MAX % span + 1) % span;
        loop {
            let x = self.next_u64();
            if x <= reject_from {
                return x % span;
            }
        }
    }

    /// Uniform on the inclusive range `[lo, hi]`.
    pub fn range_inclusive(&mut self, lo: i128, hi: i128) -> i128 {
        assert!(lo <= hi);
        lo + self.below((hi - lo + 1) as u128) as i128
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.unit_f64() < p
    }
}

/// What a derived seed is used for. Each purpose has its own stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Purpose {
    Topology,
    Thresholds,
    InitialState,
}

impl Purpose {
    /// ASCII tag of the purpose name, packed big-endian into a `u64`.
    pub const fn tag(self) -> u64 {
        match self {
            Purpose::Topology => u64::from_be_bytes(*b"topology"),
            Purpose::Thresholds => u64::from_be_bytes(*b"thresh\0\0"),
            Purpose::InitialState => u64::from_be_bytes(*b"initial\0"),
        }
    }
}

/// Constants of the seed derivation tree, recorded in run manifests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedTreeConstants {
    pub scheme: String,
    pub golden_gamma: String,
    pub topology_tag: String,
    pub thresholds_tag: String,
    pub initial_state_tag: String,
}

impl SeedTreeConstants {
    pub fn current() -> Self {
        Self {
            scheme:
                "child = splitmix64(splitmix64(master ^ tag) ^ index); draws = xoshiro256**(child)"
                    .to_string(),
            golden_gamma: format!("{GOLDEN_GAMMA:#018x}"),
            topology_tag: format!("{:#018x}", Purpose::Topology.tag()),
            thresholds_tag: format!("{:#018x}", Purpose::Thresholds.tag()),
            initial_state_tag: format!("{:#018x}", Purpose::InitialState.tag()),
        }
    }
}

/// First output of a SplitMix64 stream seeded with `x`.
#[inline]
pub fn mix64(x: u64) -> u64 {
    SplitMix64::new(x).next_u64()
}

/// Child seed for `purpose` at `index` under `master`.
pub fn derive_seed(master: u64, purpose: Purpose, index: u64) -> u64 {
    mix64(mix64(master ^ purpose.tag()) ^ index)
}
