//! The result envelope and atomic file output.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The subcommand, its flags and its parsed input, as run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandEcho {
    pub name: String,
    pub flags: Value,
    pub input: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultEnvelope {
    pub command: CommandEcho,
    /// SHA-256 of the serialized command echo. Object keys serialize in
    /// sorted order, so equal jobs hash equally.
    pub inputs_hash: String,
    pub outputs: Value,
    pub diagnostics: Value,
    pub version: String,
}

impl ResultEnvelope {
    pub fn new(command: CommandEcho, outputs: Value, diagnostics: Value) -> Self {
        let bytes = serde_json::to_vec(&command).expect("JSON values always serialize");
        Self { inputs_hash: format!("{:x}", Sha256::digest(&bytes)), command, outputs, diagnostics, version: VERSION.to_string() }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("JSON values always serialize");
        s.push('\n');
        s
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
