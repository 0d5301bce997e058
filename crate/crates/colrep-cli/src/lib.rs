//! Library side of the CLI harness: command implementations, report
//! envelope, and the persisted-dictionary container. The `colrep` binary
//! is a thin clap dispatcher over [`commands`].

pub mod cli_error;
pub mod commands;
pub mod dict_io;
pub mod modelrun;
pub mod opts;
pub mod report;
