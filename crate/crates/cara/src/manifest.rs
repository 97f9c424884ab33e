//! Record of one invocation, enough to reproduce its output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    /// SHA-256 of every input file, keyed by the path as given.
    pub input_digests: BTreeMap<String, String>,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub threads: usize,
    pub version: String,
    pub exit_code: i32,
    pub wall_time_seconds: f64,
}
