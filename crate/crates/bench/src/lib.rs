//! Benchmarks live under `benches/`; this crate only hosts them.
