//! Criterion benchmarks for teapot-core; see `benches/`.
