//! Batch verification harness for `quadnorm`: discriminant scans with
//! canonical JSON-lines and CSV output, divisibility statistics, composite
//! verification reports and transfer surveys.

pub mod config;
pub mod error;
pub mod groups;
pub mod scan;
pub mod stats;
pub mod verify;

pub use config::{RunConfig, CONFIG_ENV};
pub use error::{HarnessError, Result};
