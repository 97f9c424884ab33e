//! Command-line front end for `cara-core`: JSON and CSV input/output, run
//! manifests and thread-parallel drivers.

pub mod cli;
pub mod commands;
pub mod io;
pub mod manifest;
pub mod parallel;

pub use cli::{run, Outcome};
pub use parallel::ParallelFitter;
