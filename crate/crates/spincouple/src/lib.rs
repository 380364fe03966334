//! File formats, artifact writing and the command implementations behind
//! the `spincouple` binary.
//!
//! Each command takes a plain config struct and an [`output::Output`]
//! directory, validates everything before computing, and writes its tables
//! (JSON and/or CSV), any text artifacts, and a `manifest.json` echoing the
//! effective configuration and the numeric cross-checks. Outputs carry no
//! timestamps or paths, so identical configs give byte-identical files.

pub mod cg_table;
pub mod classify;
pub mod couple;
pub mod dto;
mod error;
pub mod jc;
pub mod output;
pub mod spatial;

pub use error::{CliError, CliResult};
