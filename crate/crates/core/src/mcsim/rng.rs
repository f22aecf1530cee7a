//! Counter-derived random substreams: one independent ChaCha stream per
//! `(seed, trial, role)`, so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a substream is used for within a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Source = 0,
    Codebook1 = 1,
    Codebook2 = 2,
    Noise = 3,
}

/// Generator for `role` in `trial` under `seed`.
pub fn substream(seed: u64, trial: u64, role: Role) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((trial << 2) | role as u64);
    rng
}
