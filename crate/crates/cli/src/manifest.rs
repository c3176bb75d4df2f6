//! Run manifest: one `manifest.json` per command invocation recording the
//! resolved configuration, timestamps, and a SHA-256 digest of every file
//! the command produced. Written atomically via a temp file in the output
//! directory so a crash never leaves a half-written manifest behind.

use std::io::Write as _;
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use sha2::{Digest, Sha256};

use epictrl_core::error::{Error, Result};

use crate::config::ToolkitConfig;

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub toolkit_version: String,
    pub command: String,
    pub seed: u64,
    pub started_at: String,
    pub finished_at: String,
    pub config: ToolkitConfig,
    pub outputs: Vec<OutputRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        use std::fmt::Write as _;
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}

fn rfc3339(t: DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl RunManifest {
    /// `command` is the full subcommand invocation (name plus arguments):
    /// together with the configuration snapshot and seed it is everything
    /// needed to repeat the run.
    pub fn begin(command: &str, seed: u64, config: &ToolkitConfig) -> Self {
        let now = rfc3339(Utc::now());
        RunManifest {
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            started_at: now.clone(),
            finished_at: now,
            config: config.clone(),
            outputs: Vec::new(),
        }
    }

    /// Hashes an already-written output file and records it by the name it
    /// carries inside the output directory.
    pub fn record(&mut self, dir: &Path, name: &str) -> Result<()> {
        let bytes = std::fs::read(dir.join(name))?;
        self.outputs.push(OutputRecord {
            path: name.to_string(),
            sha256: sha256_hex(&bytes),
        });
        Ok(())
    }

    pub fn finish(mut self, dir: &Path) -> Result<()> {
        self.finished_at = rfc3339(Utc::now());
        let json = serde_json::to_string_pretty(&self)
            .map_err(|e| Error::Format(format!("manifest serialization failed: {e}")))?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(json.as_bytes())?;
        tmp.write_all(b"\n")?;
        tmp.persist(dir.join("manifest.json"))
            .map_err(|e| Error::Io(e.error))?;
        Ok(())
    }
}
