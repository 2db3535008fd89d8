//! Benchmark-only package; see `benches/oracles.rs`.
