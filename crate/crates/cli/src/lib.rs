//! File formats, configuration and command implementations behind the
//! `abcdo` binary.

pub mod analyze;
pub mod config;
pub mod error;
pub mod io;
pub mod sweep;

pub use error::{CliError, Result};
