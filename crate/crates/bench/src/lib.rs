//! Criterion benchmarks for the core algebra kernels live in `benches/`.
