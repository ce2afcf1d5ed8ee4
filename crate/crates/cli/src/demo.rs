//! Helpers for the `demo` subcommands.

use std::time::Instant;

use anyhow::Result;
use num_bigint::BigUint;
use padic_ergo_core::genlib::Generator;
use rand::Rng;

/// Random `γ_0, …, γ_(n-1)` with `γ_j < 2^(2^j)`.
pub fn random_gammas(rng: &mut impl Rng, n: u32) -> Vec<BigUint> {
    (0..n)
        .map(|j| {
            let mut g = BigUint::default();
            for i in 0..1u64 << j {
                if rng.gen::<bool>() {
                    g.set_bit(i, true);
                }
            }
            g
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Throughput {
    pub words: u64,
    pub seconds: f64,
    pub words_per_second: f64,
    /// XOR of every word, so the loop cannot be optimised away.
    pub checksum: u64,
}

/// Times `words` state transitions.
pub fn bench(gen: &mut Generator, seed: u64, words: u64) -> Result<Throughput> {
    let mut state = gen.seed(seed);
    let mut checksum = 0u64;
    let start = Instant::now();
    for _ in 0..words {
        checksum ^= gen.step(&mut state)?.value();
    }
    let seconds = start.elapsed().as_secs_f64();
    Ok(Throughput {
        words,
        seconds,
        words_per_second: words as f64 / seconds.max(1e-9),
        checksum,
    })
}
