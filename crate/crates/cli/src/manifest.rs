use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// What was run and on which inputs. Embedded verbatim in every report, so it
/// holds only deterministic fields; wall-clock timings live in `RunRecord`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct RunManifest {
    pub command: String,
    pub primes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub retries: Option<usize>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub options: BTreeMap<String, String>,
    /// sha256 of each input file, keyed by role.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub inputs: BTreeMap<String, String>,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            primes: Vec::new(),
            seed: None,
            retries: None,
            options: BTreeMap::new(),
            inputs: BTreeMap::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn option(mut self, key: &str, value: impl ToString) -> Self {
        self.options.insert(key.to_string(), value.to_string());
        self
    }

    pub fn input(mut self, role: &str, bytes: &[u8]) -> Self {
        self.inputs.insert(role.to_string(), sha256_hex(bytes));
        self
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Side record of a run: manifest, stage timings and digests of the outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub manifest: RunManifest,
    pub threads: usize,
    /// Seconds per stage.
    pub timings: BTreeMap<String, f64>,
    pub outputs: BTreeMap<String, String>,
}
