//! CLI companion to `realgame-core`: deterministic JSON/CSV serialization,
//! threaded drivers for the optimizer and the noise pipeline, and the
//! command implementations behind the `realgame` binary.
//!
//! Everything here is plumbing around the core library: no physics or
//! optimization logic lives in this crate.

#![forbid(unsafe_code)]

/// Top-level version tag stamped on every JSON document this tool emits.
pub const SCHEMA: &str = "realgame/1";

pub mod csv;
pub mod error;
pub mod json;
pub mod parallel;
pub mod run;
pub mod schema;
