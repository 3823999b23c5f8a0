//! Batch sweeps, the cross-validation suite and determinant reports on top
//! of `wiretap-core`.

pub mod config;
pub mod det;
mod error;
pub mod sweep;
pub mod validate;

pub use config::{parse_config, SweepSpec};
pub use error::{CliError, CliResult};
pub use sweep::{run_sweep, to_csv, write_atomic, CurvePoint};
pub use validate::{parse_validate_config, run_validation, Report, ValidateConfig};
