//! Deterministic seed derivation.
//!
//! All randomness in the crate flows from a single top-level `u64` seed.
//! Each task that needs its own stream (sampling one cuisine, splitting
//! one class, initializing one network layer, ...) derives a sub-seed
//! with [`derive`], which hashes the base seed together with a textual
//! label. Derivation is pure and platform-independent, so two runs with
//! the same configuration consume identical random streams regardless of
//! iteration order elsewhere in the program.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use sha2::{Digest, Sha256};

/// Derive a sub-seed from `base` and a task label.
///
/// The sub-seed is the first eight bytes (little-endian) of
/// `SHA-256(base_le || label)`.
pub fn derive(base: u64, label: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(base.to_le_bytes());
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    let mut eight = [0u8; 8];
    eight.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(eight)
}

/// A ChaCha stream seeded from `derive(base, label)`.
pub fn rng(base: u64, label: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(base, label))
}
