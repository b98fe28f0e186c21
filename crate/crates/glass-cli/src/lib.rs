//! Support library for the `glass` binary: the network spec file format and
//! the deterministic report serializer. Split out of `main.rs` so the
//! integration tests can exercise parsing and serialization directly.

pub mod report;
pub mod spec_file;
