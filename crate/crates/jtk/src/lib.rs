//! Instance files, reports and the command surface of the `jtk` tool.

pub mod commands;
pub mod dsl;
pub mod hunt;
pub mod report;
