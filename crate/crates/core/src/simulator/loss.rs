//! Seeded per-directed-edge per-round Bernoulli message loss.
//!
//! Drop decisions are a pure function of `(seed, round, source, destination)`
//! via a fixed splitmix64-style keyed hash, so the loss pattern does not
//! depend on message iteration order and is identical on every platform.

use super::SimError;
use crate::topology::NodeId;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossModel {
    f: f64,
    seed: u64,
}

impl LossModel {
    /// Requires `0 ≤ f < 1`.
    pub fn new(f: f64, seed: u64) -> Result<Self, SimError> {
        if !(0.0..1.0).contains(&f) {
            return Err(SimError::InvalidLossRate(f));
        }
        Ok(LossModel { f, seed })
    }

    pub fn loss_rate(&self) -> f64 {
        self.f
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> LossModel {
        LossModel { seed, ..*self }
    }

    /// Whether the message `src → dst` of the given round is lost.
    pub fn drops(&self, round: u64, src: NodeId, dst: NodeId) -> bool {
        self.f > 0.0 && unit_hash(self.seed, round, src.0 as u64, dst.0 as u64) < self.f
    }
}

/// splitmix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes `(seed, round, src, dst)` to a uniform value in `[0, 1)`.
fn unit_hash(seed: u64, round: u64, src: u64, dst: u64) -> f64 {
    let mut h = mix64(seed ^ 0x9E37_79B9_7F4A_7C15);
    h = mix64(h ^ (round.wrapping_add(1)).wrapping_mul(0xA076_1D64_78BD_642F));
    h = mix64(h ^ (src.wrapping_add(1)).wrapping_mul(0xE703_7ED1_A0B4_28DB));
    h = mix64(h ^ (dst.wrapping_add(1)).wrapping_mul(0x8EBC_6AF0_9C88_C6E3));
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
