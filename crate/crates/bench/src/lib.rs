// SPDX-License-Identifier: Apache-2.0

//! Inputs shared by the benchmarks in `benches/`.

use sentinel_core::corpus::{self, Category};

/// Source of the timestamp lottery used as the single-contract baseline.
pub const LOTTERY: &str = include_str!("../../core/tests/fixtures/lottery.sol");

/// A mixed corpus with `each` contracts per category, as `(id, source)` pairs.
pub fn mixed_corpus(seed: u64, each: usize) -> Vec<(String, String)> {
    let counts = Category::ALL.into_iter().map(|c| (c, each)).collect();
    corpus::generate(seed, &counts)
        .into_iter()
        .map(|g| (g.entry.contract_id, g.source))
        .collect()
}
