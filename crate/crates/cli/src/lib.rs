//! Std companion to `allgenus-core`: file formats, deterministic parallel
//! sampling, check suites and the command implementations behind the
//! `allgenus` binary.

pub mod commands;
pub mod criteria;
pub mod error;
pub mod output;
pub mod sampling;
pub mod tables;

pub use error::CliError;

/// Version stamped into every emitted file.
pub const FORMAT_VERSION: u32 = 1;
