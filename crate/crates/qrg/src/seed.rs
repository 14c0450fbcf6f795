//! Counter-based seed derivation.
//!
//! Every random stream is a ChaCha8 generator seeded from
//! `SHA-256("qrg-seed-v1" || master || len(id) || id || trial)` (integers as
//! little-endian u64), so a trial's randomness depends only on its own
//! coordinates and never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

const DOMAIN: &[u8] = b"qrg-seed-v1";

pub fn derive_seed(master: u64, id: &str, trial: u64) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(DOMAIN);
    h.update(master.to_le_bytes());
    h.update((id.len() as u64).to_le_bytes());
    h.update(id.as_bytes());
    h.update(trial.to_le_bytes());
    h.finalize().into()
}

/// First eight bytes of [`derive_seed`] as a `u64`, for APIs taking a scalar seed.
pub fn derive_u64(master: u64, id: &str, trial: u64) -> u64 {
    let d = derive_seed(master, id, trial);
    u64::from_le_bytes(d[..8].try_into().unwrap())
}

pub fn trial_rng(master: u64, id: &str, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(derive_seed(master, id, trial))
}
