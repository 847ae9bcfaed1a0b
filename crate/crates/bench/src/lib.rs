//! Criterion benchmarks for `surfq`; see `benches/`.
