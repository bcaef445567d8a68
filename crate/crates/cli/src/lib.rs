//! Validation suites, reports and mesh export behind the `polarmap` binary.

pub mod config;
pub mod mesh;
pub mod report;
pub mod validate;

pub use config::{RunConfig, Validator};
pub use validate::{run, ValidationReport};

/// Exit codes of the binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VALIDATION_FAILED: i32 = 1;
    pub const BAD_CONFIG: i32 = 2;
    pub const IO: i32 = 3;
}
