//! Library half of the `padic-ergo` command-line tool.
//!
//! The binary is a thin clap layer over these modules so the integration
//! tests can drive the same code paths without spawning processes.

pub mod criteria;
pub mod demo;
pub mod report;
pub mod spec;
pub mod splice;

/// Exit status when every requested check holds.
pub const EXIT_OK: i32 = 0;
/// Exit status when a criterion or statistic fails, or a generator is refused.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for parse and usage errors.
pub const EXIT_USAGE: i32 = 2;

/// Version of the JSON documents this tool writes.
pub const SCHEMA: u32 = 1;
