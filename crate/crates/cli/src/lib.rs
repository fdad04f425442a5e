//! Front end for the periodpoly library: subcommands and the shared check suite.

pub mod checks;
pub mod commands;
