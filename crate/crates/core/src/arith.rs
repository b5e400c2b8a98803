//! Bounded integer lattice and the primitive operations used by every update.
//!
//! Values are carried as `i128` so that any domain up to 64 bits (signed or
//! unsigned) and any wide accumulation fit without overflow. A value only
//! becomes "bounded" after passing through [`IntegerDomain::clamp`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Signedness {
    #[default]
    Unsigned,
    Signed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverflowMode {
    #[default]
    Saturate,
    Wrap,
}

/// A `bits`-wide integer register with its overflow behaviour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntegerDomain {
    bits: u32,
    signedness: Signedness,
    overflow: OverflowMode,
    min: i128,
    max: i128,
}

impl IntegerDomain {
    pub fn new(bits: u32, signedness: Signedness, overflow: OverflowMode) -> Result<Self> {
        if !(1..=64).contains(&bits) {
            return Err(Error::InvalidBitWidth(bits));
        }
        let (min, max) = match signedness {
            Signedness::Unsigned => (0, (1i128 << bits) - 1),
            Signedness::Signed => (-(1i128 << (bits - 1)), (1i128 << (bits - 1)) - 1),
        };
        Ok(Self {
            bits,
            signedness,
            overflow,
            min,
            max,
        })
    }

    /// Unsigned saturating domain, the configuration used by the experiments.
    pub fn unsigned(bits: u32) -> Result<Self> {
        Self::new(bits, Signedness::Unsigned, OverflowMode::Saturate)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn signedness(&self) -> Signedness {
        self.signedness
    }

    pub fn overflow_mode(&self) -> OverflowMode {
        self.overflow
    }

    pub fn min_value(&self) -> i128 {
        self.min
    }

    pub fn max_value(&self) -> i128 {
        self.max
    }

    /// Number of representable values, `2^bits`.
    pub fn cardinality(&self) -> u128 {
        1u128 << self.bits
    }

    pub fn contains(&self, x: i128) -> bool {
        self.min <= x && x <= self.max
    }

    /// Map an unbounded intermediate onto the lattice.
    #[inline]
    pub fn clamp(&self, x: i128) -> i128 {
        match self.overflow {
            OverflowMode::Saturate => x.clamp(self.min, self.max),
            OverflowMode::Wrap => {
                if self.contains(x) {
                    x
                } else {
                    let m = 1i128 << self.bits;
                    (x.rem_euclid(m) - self.min).rem_euclid(m) + self.min
                }
            }
        }
    }

    /// Position of `x` within the domain, `0..cardinality`.
    pub(crate) fn offset(&self, x: i128) -> u128 {
        (x - self.min) as u128
    }
}

/// Shift-based leak: `v - (v >> k)`.
///
/// The shift is arithmetic, so negative potentials round toward -inf before
/// the subtraction. For `v >= 0` this is `ceil(v * (1 - 2^-k))`.
#[inline]
pub fn leak_shift(v: i128, k: u32) -> i128 {
    v - (v >> k)
}
