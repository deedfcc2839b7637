//! Run manifests: a JSON record of the command, resolved parameters, input
//! digests, and outputs, written alongside every result. Byte-identical
//! reruns are guaranteed for the data files; the manifest itself differs
//! only in its timestamp.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub timestamp: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    pub parameters: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            master_seed: None,
            parameters,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn add_input_bytes(&mut self, label: &str, bytes: &[u8]) {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        self.inputs.push(InputDigest {
            path: label.to_string(),
            sha256: format!("{:x}", hasher.finalize()),
        });
    }

    pub fn add_input_file(&mut self, path: &Path) -> Result<(), CliError> {
        let bytes = fs::read(path)?;
        self.add_input_bytes(&path.display().to_string(), &bytes);
        Ok(())
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let path = dir.join("manifest.json");
        let mut file = fs::File::create(&path)?;
        let body = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::other(format!("manifest serialization: {e}")))?;
        writeln!(file, "{body}")?;
        Ok(())
    }
}

/// Shortest decimal representation that round-trips to the same f64.
pub fn fmt_num(x: f64) -> String {
    format!("{x}")
}
