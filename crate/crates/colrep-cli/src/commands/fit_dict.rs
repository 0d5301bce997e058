use std::path::PathBuf;

use clap::Args;
use colrep::dictlearn::{fit_dlnscr, DlConfig, FitTrace};
use serde::{Deserialize, Serialize};

use crate::cli_error::{usage, CliResult};
use crate::dict_io::{save_dictionary, FitSummary};
use crate::opts::{load_config, load_dataset, overlay, resolve_block_sizes};
use crate::report::{emit, millis, Envelope};

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct FitDictArgs {
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    #[arg(long)]
    pub data: Option<PathBuf>,

    #[arg(long)]
    pub label_column: Option<String>,

    /// Rescale every sample to unit l2 norm first.
    #[arg(long)]
    #[serde(skip)]
    pub normalize: bool,
    #[arg(skip)]
    #[serde(rename = "normalize")]
    pub normalize_config: Option<bool>,

    /// Coefficient regularizer lambda1.
    #[arg(long)]
    pub lambda: Option<f64>,

    /// Uniform dictionary atoms per class.
    #[arg(long)]
    pub block_size: Option<usize>,

    /// Comma-separated per-class atom counts.
    #[arg(long)]
    pub block_sizes: Option<String>,

    #[arg(long)]
    pub max_iters: Option<usize>,

    #[arg(long)]
    pub rel_tol: Option<f64>,

    /// Seeds the random fill of rank-deficient initial blocks.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Dictionary container output path.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Fit trace JSON path (stdout when omitted).
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct FitDictConfig {
    data: PathBuf,
    label_column: String,
    normalize: bool,
    lambda: f64,
    block_sizes: Vec<usize>,
    max_iters: usize,
    rel_tol: f64,
    seed: u64,
    out: PathBuf,
}

#[derive(Debug, Serialize)]
struct FitDictResults {
    dictionary_path: PathBuf,
    dim: usize,
    total_atoms: usize,
    #[serde(flatten)]
    trace: FitTrace,
}

pub fn run(args: FitDictArgs) -> CliResult<()> {
    let file: FitDictArgs = match &args.config {
        Some(path) => load_config(path)?,
        None => FitDictArgs::default(),
    };
    let data = overlay(args.data, file.data).ok_or_else(|| usage("--data is required"))?;
    let label_column =
        overlay(args.label_column, file.label_column).unwrap_or_else(|| "label".to_string());
    let normalize = args.normalize || file.normalize_config.unwrap_or(false);
    let dataset = load_dataset(&data, &label_column, normalize)?;
    let block_sizes = resolve_block_sizes(
        overlay(args.block_size, file.block_size),
        overlay(args.block_sizes, file.block_sizes).as_deref(),
        dataset.num_classes(),
    )?;

    let config = FitDictConfig {
        data,
        label_column,
        normalize,
        lambda: overlay(args.lambda, file.lambda).unwrap_or(1e-4),
        block_sizes: block_sizes.clone(),
        max_iters: overlay(args.max_iters, file.max_iters).unwrap_or(50),
        rel_tol: overlay(args.rel_tol, file.rel_tol).unwrap_or(1e-6),
        seed: overlay(args.seed, file.seed).unwrap_or(0),
        out: overlay(args.out, file.out).ok_or_else(|| usage("--out is required"))?,
    };

    let mut dl_config = DlConfig::new(config.lambda, block_sizes);
    dl_config.max_iters = config.max_iters;
    dl_config.rel_tol = config.rel_tol;
    dl_config.seed = config.seed;

    let started = std::time::Instant::now();
    let (dict, _, trace) = fit_dlnscr(&dataset, &dl_config)?;
    let fit_ms = millis(started.elapsed());
    save_dictionary(&config.out, &dict, config.lambda, FitSummary::from(&trace))?;
    eprintln!(
        "fit {} atoms over {} classes in {} iteration(s) (converged: {}); dictionary at {}",
        dict.total_atoms(),
        dict.num_classes(),
        trace.iterations,
        trace.converged,
        config.out.display()
    );

    let trace_out = overlay(args.trace, file.trace);
    let results = FitDictResults {
        dictionary_path: config.out.clone(),
        dim: dict.dim(),
        total_atoms: dict.total_atoms(),
        trace,
    };
    let mut envelope = Envelope::new("fit-dict", config, results);
    envelope.timing("fit_ms", fit_ms);
    emit(trace_out.as_ref(), &envelope.to_json()?)
}
