//! Criterion benchmarks for the sigforge engines live in `benches/`.
