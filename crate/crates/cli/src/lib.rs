//! Batch experiment driver for `currents-core`.

pub mod config;
pub mod experiments;
pub mod output;
pub mod run;

/// Exit status when some experiment recorded an error in the manifest.
pub const EXIT_EXPERIMENT_FAILED: i32 = 1;
/// Exit status for configuration and usage errors.
pub const EXIT_INVALID: i32 = 2;
