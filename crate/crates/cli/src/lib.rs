//! Command-line front end: text documents in, JSON reports out.

pub mod commands;
pub mod document;
pub mod report;
