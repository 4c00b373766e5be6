use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// All of `0..len` when `len ≤ limit`, otherwise a sorted deterministic sample of size `limit`.
pub(crate) fn sample_indices(len: usize, limit: usize, seed: u64) -> Vec<usize> {
    if len <= limit {
        return (0..len).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = sample(&mut rng, len, limit).into_vec();
    out.sort_unstable();
    out
}
