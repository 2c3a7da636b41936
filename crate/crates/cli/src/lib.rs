//! Experiment harness behind the `hwlab` binary: each subcommand's logic lives
//! here so integration tests can drive experiments directly and the binary
//! stays a thin argument-parsing shell.

pub mod experiments;
pub mod oracle;
pub mod output;
