//! Benchmark-only crate; see `benches/pump_cycle.rs`.
