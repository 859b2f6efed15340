use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent child seed number `index` of `base`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(index);
    rng.next_u64()
}
