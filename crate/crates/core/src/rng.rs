//! Seed derivation for reproducible Monte-Carlo work.
//!
//! Every logical task (a replicate, a reference draw, a sampling call) owns a
//! `ChaCha8Rng` built from the master seed with the task index as the ChaCha
//! stream id. Streams never overlap, so results depend only on
//! `(master seed, task index)` and never on scheduling order or worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TaskRng = ChaCha8Rng;

/// Master seed used when none is given.
pub const DEFAULT_SEED: u64 = 20130601;

/// Generator for task `index` under `master_seed`.
pub fn task_rng(master_seed: u64, index: u64) -> TaskRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Derives a child master seed, used when a task itself fans out into
/// sub-tasks (e.g. a study replicate that runs its own reference simulation).
pub fn child_seed(master_seed: u64, index: u64) -> u64 {
    use rand::RngCore;
    task_rng(master_seed, index ^ 0x9E37_79B9_7F4A_7C15).next_u64()
}
