//! Persisted dictionary container: a self-describing JSON document holding
//! the matrix (column-major), block sizes, the coding regularizer, and fit
//! metadata. Floats are written in shortest round-trip form, so
//! save -> load -> save is byte-identical.

use std::path::Path;

use colrep::dictlearn::{BlockDictionary, FitTrace};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cli_error::{usage, CliError, CliResult};
use crate::report::write_atomic;

pub const DICTIONARY_FORMAT: &str = "colrep-dictionary";
pub const DICTIONARY_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitSummary {
    pub iterations: usize,
    pub converged: bool,
    pub fallback_count: usize,
    pub final_objective: Option<f64>,
}

impl From<&FitTrace> for FitSummary {
    fn from(trace: &FitTrace) -> Self {
        Self {
            iterations: trace.iterations,
            converged: trace.converged,
            fallback_count: trace.fallback_count,
            final_objective: trace.objectives.last().copied(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DictionaryFile {
    pub format: String,
    pub format_version: u32,
    pub dim: usize,
    pub block_sizes: Vec<usize>,
    pub lambda1: f64,
    pub fit: FitSummary,
    pub data_col_major: Vec<f64>,
}

pub fn save_dictionary(
    path: &Path,
    dict: &BlockDictionary,
    lambda1: f64,
    fit: FitSummary,
) -> CliResult<()> {
    let file = DictionaryFile {
        format: DICTIONARY_FORMAT.to_string(),
        format_version: DICTIONARY_FORMAT_VERSION,
        dim: dict.dim(),
        block_sizes: dict.block_sizes().to_vec(),
        lambda1,
        fit,
        data_col_major: dict.matrix().as_slice().to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn load_dictionary(path: &Path) -> CliResult<(BlockDictionary, f64, FitSummary)> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        action: "read dictionary",
        path: path.to_path_buf(),
        source,
    })?;
    let file: DictionaryFile = serde_json::from_str(&text)?;
    if file.format != DICTIONARY_FORMAT {
        return Err(usage(format!(
            "'{}' is not a {DICTIONARY_FORMAT} file",
            path.display()
        )));
    }
    if file.format_version != DICTIONARY_FORMAT_VERSION {
        return Err(usage(format!(
            "unsupported dictionary format version {}",
            file.format_version
        )));
    }
    let total: usize = file.block_sizes.iter().sum();
    if file.data_col_major.len() != file.dim * total {
        return Err(CliError::Other(format!(
            "dictionary data has {} entries, expected {}",
            file.data_col_major.len(),
            file.dim * total
        )));
    }
    let matrix = DMatrix::from_column_slice(file.dim, total, &file.data_col_major);
    let dict = BlockDictionary::new(matrix, file.block_sizes.clone())?;
    Ok((dict, file.lambda1, file.fit))
}
