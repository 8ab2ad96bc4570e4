//! Criterion benchmarks for the sparse eigensolver core live in `benches/`.
