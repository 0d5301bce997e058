//! Report envelope, atomic file output, and split fingerprints.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use colrep::dataset::LabeledDataset;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cli_error::{CliError, CliResult};

/// Common JSON wrapper for every command: provenance first, then results,
/// with wall-clock timings isolated under `timing_ms` so reruns compare
/// byte-identically outside that field.
#[derive(Debug, Serialize)]
pub struct Envelope<C: Serialize, R: Serialize> {
    pub command: &'static str,
    pub version: &'static str,
    pub config: C,
    pub results: R,
    pub timing_ms: BTreeMap<String, f64>,
}

impl<C: Serialize, R: Serialize> Envelope<C, R> {
    pub fn new(command: &'static str, config: C, results: R) -> Self {
        Self {
            command,
            version: env!("CARGO_PKG_VERSION"),
            config,
            results,
            timing_ms: BTreeMap::new(),
        }
    }

    pub fn timing(&mut self, key: &str, millis: f64) {
        self.timing_ms.insert(key.to_string(), millis);
    }

    pub fn to_json(&self) -> CliResult<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}

/// Write-then-rename so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty());
    let dir: PathBuf = match parent {
        Some(p) => p.to_path_buf(),
        None => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|source| CliError::Io {
        action: "create temporary file in",
        path: dir.clone(),
        source,
    })?;
    std::io::Write::write_all(&mut tmp, contents).map_err(|source| CliError::Io {
        action: "write",
        path: path.to_path_buf(),
        source,
    })?;
    tmp.persist(path).map_err(|e| CliError::Io {
        action: "rename into",
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

/// Emit a report: to the given file atomically, or to stdout when no path
/// was requested.
pub fn emit(path: Option<&PathBuf>, json: &str) -> CliResult<()> {
    match path {
        Some(p) => write_atomic(p, json.as_bytes()),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

/// Content fingerprint of a train/test partition: identical partitions of
/// the same data produce identical digests.
pub fn split_digest(train: &LabeledDataset, test: &LabeledDataset) -> String {
    let mut hasher = Sha256::new();
    for ds in [train, test] {
        hasher.update((ds.num_samples() as u64).to_le_bytes());
        for col in 0..ds.num_samples() {
            hasher.update((ds.labels()[col] as u64).to_le_bytes());
            for value in ds.features().column(col).iter() {
                hasher.update(value.to_le_bytes());
            }
        }
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn millis(duration: std::time::Duration) -> f64 {
    duration.as_secs_f64() * 1e3
}
