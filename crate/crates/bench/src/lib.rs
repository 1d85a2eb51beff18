//! Criterion benchmarks for submod-core; see `benches/`.
