use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Every output directory carries exactly one manifest: the command, its
/// fully resolved configuration, the seeds inside it, and hashes of all file
/// inputs. Re-running from the manifest reproduces the outputs byte for byte.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub config: serde_json::Value,
    /// Input path → SHA-256 of its content.
    pub inputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new<C: Serialize>(
        command: &str,
        config: &C,
        inputs: BTreeMap<String, String>,
    ) -> Result<Self, CliError> {
        Ok(RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: serde_json::to_value(config)
                .map_err(|e| CliError::Data(format!("config serialization: {e}")))?,
            inputs,
        })
    }

    pub fn write(&self, out_dir: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Data(format!("manifest serialization: {e}")))?;
        std::fs::write(out_dir.join("manifest.json"), text + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Data(format!("manifest parse: {e}")))
    }

    /// Confirms that every recorded input still hashes to the recorded value.
    pub fn verify_inputs(&self) -> Result<(), CliError> {
        for (path, expected) in &self.inputs {
            let got = hash_file(Path::new(path))?;
            if &got != expected {
                return Err(CliError::Data(format!(
                    "input {path} changed since the manifest was written \
                     (hash {got}, expected {expected})"
                )));
            }
        }
        Ok(())
    }
}

pub fn hash_file(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let digest = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    Ok(hex)
}

pub fn ensure_out_dir(out: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out)?;
    Ok(())
}
