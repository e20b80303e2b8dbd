//! Pipeline orchestration, artifact files and the read-only HTTP API for
//! snapwatch. The `snapwatch` binary is a thin CLI over this crate.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod api;
pub mod artifacts;
pub mod config;
pub mod fetch;
pub mod snapshot;

pub use config::{Config, Metric};
pub use snapshot::{assemble, build_snapshot, Snapshot};
