//! Criterion benchmarks for the propagators and the canonical protocol; see `benches/`.
