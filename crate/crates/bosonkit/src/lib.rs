//! Command-line companion to `bosonkit-core`: output records in JSON, CSV and
//! plain text, and the subcommands behind the `bosonkit` binary.

pub mod commands;
pub mod record;

pub use commands::{CliError, Precision};
pub use record::{Cell, Check, Format, OutputRecord, Status};
