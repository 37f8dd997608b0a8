//! Benchmarks for `torus-ech`; see `benches/invariants.rs`.
