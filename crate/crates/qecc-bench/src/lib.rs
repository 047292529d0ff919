//! Benchmark-only crate; see `benches/decoder.rs`.
