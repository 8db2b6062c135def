//! IO companion to `permcode-core`: file formats and the command
//! implementations behind the `permcode` binary.

pub mod commands;
pub mod formats;
