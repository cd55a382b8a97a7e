//! JSON formats, certificates and subcommands for `pindex-core`.

pub mod cert;
pub mod commands;
pub mod json;
