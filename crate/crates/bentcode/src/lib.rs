//! Std companion to `bentcode-core`: job specifications, parallel drivers,
//! JSON reports, the worked-example list and the command implementations
//! behind the `bentcode` binary.

pub mod commands;
pub mod jobspec;
pub mod parallel;
pub mod regression;
pub mod report;

pub use bentcode_core as core;
