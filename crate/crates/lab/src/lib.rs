//! Study driver for `shishkin-core`: configuration, convergence tables,
//! identity and hierarchical-basis check suites, and plotting dumps.

pub mod checks;
pub mod config;
pub mod dump;
pub mod error;
pub mod study;
pub mod table;

pub use config::{Format, Interpolant, Mode, Overrides, StudyConfig};
pub use error::{LabError, LabResult};
