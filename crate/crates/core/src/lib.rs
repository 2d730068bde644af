//! Static checker for machine-learning-specific code smells in Python code.

pub mod cli;
pub mod engine;
pub mod frontend;
pub mod harness;
pub mod report;
pub mod rules;
pub mod semantic;
