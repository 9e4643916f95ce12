//! Criterion benchmarks for betakit live under `benches/`.
