//! Command-line and HTTP front ends for the maturity assessment engine.

pub mod commands;
pub mod server;
