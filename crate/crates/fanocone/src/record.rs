use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Sidecar describing one CLI run. Only `timing_ms` varies between
/// identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub command: String,
    pub input_hash: String,
    pub output: serde_json::Value,
    pub timing_ms: u64,
    pub version: String,
}

/// SHA-256 over the command name, its parameters (as canonical JSON) and
/// the raw input document, NUL separated.
pub fn input_hash(command: &str, params: &serde_json::Value, input: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0u8]);
    h.update(params.to_string().as_bytes());
    h.update([0u8]);
    h.update(input);
    hex::encode(h.finalize())
}

impl RunRecord {
    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        text.push('\n');
        std::fs::write(path, text)
    }
}
