//! Batch front end: structured input documents, verification commands and
//! deterministic reports.

pub mod commands;
pub mod input;
pub mod output;

pub use commands::{build_algebra, build_presentation, run_command, Command, Flags, InputRejected};
pub use input::{parse_input, serialize, InputDocument, InputError};
pub use output::{Format, Output};
