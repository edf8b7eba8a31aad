use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream `stream` of the generator seeded by `master`.
///
/// Realization `i` of an evaluation uses stream `i`; auxiliary randomness
/// (probability estimation, bootstrap) uses streams from the top of the range.
pub fn stream_rng(master: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng
}
