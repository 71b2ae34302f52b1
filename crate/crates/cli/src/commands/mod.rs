pub mod demo;
pub mod fit;
pub mod sweep;
pub mod synth;

use std::path::Path;

use crate::error::CliError;
use crate::manifest::RunManifest;

/// Re-executes the command recorded in a manifest into a fresh directory.
/// Input hashes are verified first so a silent data change cannot masquerade
/// as a reproduction.
pub fn rerun(manifest_path: &Path, out: &Path) -> Result<(), CliError> {
    let manifest = RunManifest::read(manifest_path)?;
    manifest.verify_inputs()?;
    let config = manifest.config.clone();
    match manifest.command.as_str() {
        "synth" => synth::run(&parse_config(config)?, out),
        "fit" => fit::run(&parse_config(config)?, out),
        "sweep" => sweep::run(&parse_config(config)?, out),
        "demo-toy" => demo::run(&parse_config(config)?, out),
        other => Err(CliError::Data(format!(
            "manifest names unknown command {other:?}"
        ))),
    }
}

fn parse_config<C: serde::de::DeserializeOwned>(value: serde_json::Value) -> Result<C, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Data(format!("manifest config: {e}")))
}

/// Full-precision decimal used in every CSV/text output so values survive a
/// parse round trip bit for bit.
pub fn fmt_f64(value: f64) -> String {
    format!("{value}")
}
