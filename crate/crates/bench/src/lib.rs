//! Benchmark-only package; see `benches/pipeline.rs`.
