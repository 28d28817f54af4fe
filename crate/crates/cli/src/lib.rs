//! Support code for the `shadowcover` command-line tool: canonical JSON
//! output and the reference reproduction suite.

pub mod canonical;
pub mod repro;
