//! Shared fixtures for the benchmarks.

use betapolar::beta_expansion::rank_by_pw;
use betapolar::codec::{select_frozen, CodeConfig};
use betapolar::simulation::{transmit, Modulation};
use betapolar::BETA_QUARTER_ROOT_TWO;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A rate-1/2 code built from the `2^{1/4}` sequence.
pub fn half_rate_code(n: u32, crc_bits: usize, list_size: usize) -> CodeConfig {
    let seq = rank_by_pw(n, BETA_QUARTER_ROOT_TWO).expect("2^{1/4} is not a breakpoint");
    let k = (1usize << n) / 2 - crc_bits;
    select_frozen(&seq, k, crc_bits)
        .and_then(|c| c.with_list_size(list_size))
        .expect("valid code")
}

/// `count` noisy LLR vectors for random messages of `code`.
pub fn noisy_words(code: &CodeConfig, snr_db: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let info: Vec<u8> = (0..code.info_count()).map(|_| rng.random_range(0..2u8)).collect();
            let word = code.encode_info(&info).expect("info length matches");
            transmit(&word.x, snr_db, Modulation::Qpsk, &mut rng)
        })
        .collect()
}
