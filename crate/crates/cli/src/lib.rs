//! Command-line front end for `alphadpp-core`: parameter parsing, CSV/JSON
//! output of figure data, parallel replicate runs and the verification suite.

pub mod commands;
pub mod config;
pub mod output;
pub mod parallel;
pub mod stats;
pub mod verify;
