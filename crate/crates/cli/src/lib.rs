//! File formats and command implementations behind the `qfsieve` binary.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{run, Command};
pub use config::RunConfig;
pub use error::{CliError, Result};
