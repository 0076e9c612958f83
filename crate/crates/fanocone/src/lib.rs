//! JSON formats, run records and the `fanocone` command-line interface on
//! top of [`fanocone_core`].

pub use fanocone_core as core;

pub mod cli;
pub mod format;
pub mod record;

pub use cli::dispatch;
