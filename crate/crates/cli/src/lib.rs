//! Command-line tools and the HTTP classifier built on `pqdtw-core`.

pub mod commands;
pub mod service;
pub mod synth;
