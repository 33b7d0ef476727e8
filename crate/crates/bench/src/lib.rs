//! Benchmarks for the counting engine live in `benches/`.
