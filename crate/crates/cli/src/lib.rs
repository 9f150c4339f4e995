//! Command-line front end for `gqms-core`: single-point analysis,
//! parallel parameter sweeps writing CSV/JSON region files, and the
//! self-test suites.

pub mod analyze;
pub mod config;
pub mod error;
pub mod output;
pub mod selftest;
pub mod sweep;

pub use config::{Axis, ModelKind, Overrides, SweepConfig};
pub use error::{CliError, CliResult};
pub use sweep::{RegionSample, Status};
