//! File formats, instance envelopes, certificates and commands on top of `apolar-core`.

pub mod commands;
pub mod format;
pub mod instance;
