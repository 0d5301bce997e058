use std::path::PathBuf;

use clap::Args;
use colrep::dataset::{save_csv, synth_gaussian, SynthSpec};
use serde::{Deserialize, Serialize};

use crate::cli_error::{usage, CliError, CliResult};
use crate::opts::{load_config, overlay};
use crate::report::{millis, Envelope};

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct SynthArgs {
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Number of classes (at least 2).
    #[arg(long)]
    pub classes: Option<usize>,

    /// Feature dimension.
    #[arg(long)]
    pub dim: Option<usize>,

    /// Samples per class.
    #[arg(long)]
    pub per_class: Option<usize>,

    /// Distance between class means in within-class standard deviations.
    #[arg(long)]
    pub separation: Option<f64>,

    #[arg(long)]
    pub seed: Option<u64>,

    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct SynthConfig {
    classes: usize,
    dim: usize,
    per_class: usize,
    separation: f64,
    seed: u64,
    out: PathBuf,
}

#[derive(Debug, Serialize)]
struct SynthResults {
    samples: usize,
    classes: usize,
    dim: usize,
    path: PathBuf,
}

pub fn run(args: SynthArgs) -> CliResult<()> {
    let file: SynthArgs = match &args.config {
        Some(path) => load_config(path)?,
        None => SynthArgs::default(),
    };
    let config = SynthConfig {
        classes: overlay(args.classes, file.classes).ok_or_else(|| usage("--classes is required"))?,
        dim: overlay(args.dim, file.dim).ok_or_else(|| usage("--dim is required"))?,
        per_class: overlay(args.per_class, file.per_class)
            .ok_or_else(|| usage("--per-class is required"))?,
        separation: overlay(args.separation, file.separation).unwrap_or(4.0),
        seed: overlay(args.seed, file.seed).unwrap_or(0),
        out: overlay(args.out, file.out).ok_or_else(|| usage("--out is required"))?,
    };

    let spec = SynthSpec {
        num_classes: config.classes,
        dim: config.dim,
        samples_per_class: config.per_class,
        class_separation: config.separation,
        seed: config.seed,
    };
    let started = std::time::Instant::now();
    let dataset = synth_gaussian(&spec).map_err(|e| match e {
        colrep::Error::InvalidParameter(msg) => usage(msg),
        other => CliError::Toolkit(other),
    })?;

    // Write the CSV through a temp file so the output appears atomically.
    let dir = config
        .out
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(|p| p.to_path_buf())
        .unwrap_or_else(|| PathBuf::from("."));
    let tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|source| CliError::Io {
        action: "create temporary file in",
        path: dir,
        source,
    })?;
    save_csv(&dataset, tmp.path())?;
    tmp.persist(&config.out).map_err(|e| CliError::Io {
        action: "rename into",
        path: config.out.clone(),
        source: e.error,
    })?;

    let results = SynthResults {
        samples: dataset.num_samples(),
        classes: dataset.num_classes(),
        dim: dataset.dim(),
        path: config.out.clone(),
    };
    eprintln!(
        "wrote {} samples ({} classes, dim {}) to {}",
        results.samples,
        results.classes,
        results.dim,
        config.out.display()
    );
    let mut envelope = Envelope::new("synth", config, results);
    envelope.timing("generate_ms", millis(started.elapsed()));
    print!("{}", envelope.to_json()?);
    Ok(())
}
