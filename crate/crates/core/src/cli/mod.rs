//! Batch commands behind the `sgm` binary.

mod commands;
mod config;
mod output;

pub use commands::{load_trajectory, run, Outcome, EXIT_FAILURE, EXIT_INVALID_CONFIG, EXIT_PASS};
pub use config::{Command, Preset, RunConfig};
pub use output::{constants, output_dir, Writer, OUTPUT_ROOT_ENV};
