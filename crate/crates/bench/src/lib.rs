//! Criterion benchmarks for the certification pipelines live in `benches/`.
