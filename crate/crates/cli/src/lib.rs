//! Command-line front end: configuration files, parameter sweeps and
//! figure-data presets with CSV / JSON output.

// `!(x > 0)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod figures;
pub mod output;
pub mod sweep;

pub use config::{validate_config, RunConfig};
pub use error::CliError;
pub use figures::{reproduce_figure, Dataset};
pub use output::{Table, Value};
pub use sweep::{run_sweep, Axis, Observable, SweepSpec};
