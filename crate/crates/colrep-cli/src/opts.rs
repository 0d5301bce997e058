//! Shared option types and config-file merging.
//!
//! Every command accepts `--config <json>` holding the same keys as its
//! flags; explicit flags override file values.

use std::path::Path;

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cli_error::{usage, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Mpd,
    CrcL1,
    CrcL2,
    DlNscr,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Mpd => "mpd",
            ModelKind::CrcL1 => "crc-l1",
            ModelKind::CrcL2 => "crc-l2",
            ModelKind::DlNscr => "dl-nscr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetRuleOpt {
    ConfusionEnergy,
    NormalizedResidual,
}

impl From<SetRuleOpt> for colrep::dictlearn::SetRule {
    fn from(value: SetRuleOpt) -> Self {
        match value {
            SetRuleOpt::ConfusionEnergy => colrep::dictlearn::SetRule::ConfusionEnergy,
            SetRuleOpt::NormalizedResidual => colrep::dictlearn::SetRule::NormalizedResidual,
        }
    }
}

/// Loads a JSON config file for flag merging.
pub fn load_config<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        action: "read config",
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text)
        .map_err(|e| usage(format!("invalid config file '{}': {e}", path.display())))
}

/// Field-wise overlay: flag values win over config-file values.
pub fn overlay<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

/// Parses a comma-separated block-size list.
pub fn parse_block_sizes(text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("invalid block size '{part}'")))
        })
        .collect()
}

/// Resolves the per-class dictionary block sizes for a dataset with
/// `classes` classes from the `--block-size` / `--block-sizes` pair.
pub fn resolve_block_sizes(
    uniform: Option<usize>,
    explicit: Option<&str>,
    classes: usize,
) -> CliResult<Vec<usize>> {
    match (uniform, explicit) {
        (Some(_), Some(_)) => Err(usage(
            "--block-size and --block-sizes are mutually exclusive",
        )),
        (Some(k), None) => {
            if k == 0 {
                return Err(usage("--block-size must be at least 1"));
            }
            Ok(vec![k; classes])
        }
        (None, Some(list)) => {
            let sizes = parse_block_sizes(list)?;
            if sizes.len() != classes {
                return Err(usage(format!(
                    "--block-sizes has {} entries but the dataset has {classes} classes",
                    sizes.len()
                )));
            }
            if sizes.contains(&0) {
                return Err(usage("every block size must be at least 1"));
            }
            Ok(sizes)
        }
        (None, None) => Err(usage(
            "dl-nscr requires --block-size or --block-sizes (atoms per class)",
        )),
    }
}

pub fn load_dataset(
    path: &Path,
    label_column: &str,
    normalize: bool,
) -> CliResult<colrep::dataset::LabeledDataset> {
    let ds = colrep::dataset::load_csv(path, label_column)?;
    if normalize {
        Ok(colrep::dataset::normalize_samples(&ds)?)
    } else {
        Ok(ds)
    }
}
