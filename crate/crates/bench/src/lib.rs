//! Criterion benchmarks for the hot kernels of `hirota-core`; see `benches/`.
