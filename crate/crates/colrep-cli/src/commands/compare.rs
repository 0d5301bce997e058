use std::path::PathBuf;

use clap::Args;
use colrep::dataset::split;
use serde::{Deserialize, Serialize};

use crate::cli_error::{usage, CliResult};
use crate::modelrun::{run_model, ModelParams};
use crate::opts::{load_config, load_dataset, overlay, resolve_block_sizes, ModelKind};
use crate::report::{emit, split_digest, write_atomic, Envelope};

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct CompareArgs {
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    #[arg(long)]
    pub data: Option<PathBuf>,

    #[arg(long)]
    pub label_column: Option<String>,

    /// Comma-separated model list, e.g. mpd,crc-l1,crc-l2,dl-nscr.
    #[arg(long)]
    pub models: Option<String>,

    #[arg(long)]
    pub train_per_class: Option<usize>,

    #[arg(long)]
    pub splits: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,

    /// Rescale every sample to unit l2 norm before splitting.
    #[arg(long)]
    #[serde(skip)]
    pub normalize: bool,
    #[arg(skip)]
    #[serde(rename = "normalize")]
    pub normalize_config: Option<bool>,

    /// Shared coding regularizer for all models.
    #[arg(long)]
    pub lambda: Option<f64>,

    #[arg(long)]
    pub l1_tol: Option<f64>,

    #[arg(long)]
    pub l1_max_iter: Option<usize>,

    /// Uniform dictionary atoms per class (dl-nscr).
    #[arg(long)]
    pub block_size: Option<usize>,

    /// Comma-separated per-class atom counts (dl-nscr).
    #[arg(long)]
    pub block_sizes: Option<String>,

    #[arg(long)]
    pub dl_max_iters: Option<usize>,

    #[arg(long)]
    pub dl_rel_tol: Option<f64>,

    #[arg(long)]
    pub classify_lambda: Option<f64>,

    /// Comparison JSON path (stdout when omitted).
    #[arg(long)]
    pub out_json: Option<PathBuf>,

    /// Comparison CSV path.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct CompareConfig {
    data: PathBuf,
    label_column: String,
    models: Vec<ModelKind>,
    train_per_class: usize,
    splits: usize,
    seed: u64,
    normalize: bool,
    lambda: f64,
    l1_tol: f64,
    l1_max_iter: usize,
    block_sizes: Option<Vec<usize>>,
    dl_max_iters: usize,
    dl_rel_tol: f64,
    classify_lambda: Option<f64>,
}

#[derive(Debug, Serialize)]
struct SplitInfo {
    index: usize,
    seed: u64,
    digest: String,
}

#[derive(Debug, Serialize)]
struct ModelRow {
    model: ModelKind,
    mean_accuracy: f64,
    per_split_accuracy: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct CompareResults {
    splits: Vec<SplitInfo>,
    models: Vec<ModelRow>,
}

fn parse_models(text: &str) -> CliResult<Vec<ModelKind>> {
    let mut models = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let model = match part {
            "mpd" => ModelKind::Mpd,
            "crc-l1" => ModelKind::CrcL1,
            "crc-l2" => ModelKind::CrcL2,
            "dl-nscr" => ModelKind::DlNscr,
            other => return Err(usage(format!("unknown model '{other}'"))),
        };
        if !models.contains(&model) {
            models.push(model);
        }
    }
    if models.is_empty() {
        return Err(usage("--models needs at least one model"));
    }
    Ok(models)
}

pub fn run(args: CompareArgs) -> CliResult<()> {
    let file: CompareArgs = match &args.config {
        Some(path) => load_config(path)?,
        None => CompareArgs::default(),
    };
    let models = parse_models(
        &overlay(args.models, file.models).ok_or_else(|| usage("--models is required"))?,
    )?;
    let data = overlay(args.data, file.data).ok_or_else(|| usage("--data is required"))?;
    let label_column =
        overlay(args.label_column, file.label_column).unwrap_or_else(|| "label".to_string());
    let normalize = args.normalize || file.normalize_config.unwrap_or(false);
    let splits_requested = overlay(args.splits, file.splits).unwrap_or(1);
    if splits_requested == 0 {
        return Err(usage("--splits must be at least 1"));
    }

    let dataset = load_dataset(&data, &label_column, normalize)?;
    let wants_dl = models.contains(&ModelKind::DlNscr);
    let uniform_block = overlay(args.block_size, file.block_size);
    let explicit_blocks = overlay(args.block_sizes, file.block_sizes);
    if !wants_dl && (uniform_block.is_some() || explicit_blocks.is_some()) {
        return Err(usage("dictionary block sizes are only meaningful for dl-nscr"));
    }
    let block_sizes = if wants_dl {
        Some(resolve_block_sizes(
            uniform_block,
            explicit_blocks.as_deref(),
            dataset.num_classes(),
        )?)
    } else {
        None
    };

    let config = CompareConfig {
        data,
        label_column,
        models: models.clone(),
        train_per_class: overlay(args.train_per_class, file.train_per_class)
            .ok_or_else(|| usage("--train-per-class is required"))?,
        splits: splits_requested,
        seed: overlay(args.seed, file.seed).unwrap_or(0),
        normalize,
        lambda: overlay(args.lambda, file.lambda).unwrap_or(1e-4),
        l1_tol: overlay(args.l1_tol, file.l1_tol).unwrap_or(1e-6),
        l1_max_iter: overlay(args.l1_max_iter, file.l1_max_iter).unwrap_or(100_000),
        block_sizes,
        dl_max_iters: overlay(args.dl_max_iters, file.dl_max_iters).unwrap_or(50),
        dl_rel_tol: overlay(args.dl_rel_tol, file.dl_rel_tol).unwrap_or(1e-6),
        classify_lambda: overlay(args.classify_lambda, file.classify_lambda),
    };
    if config.train_per_class == 0 || config.train_per_class >= dataset.min_class_count() {
        return Err(usage(format!(
            "--train-per-class must be in 1..{} for this dataset",
            dataset.min_class_count()
        )));
    }

    // All models see the same partitions: the split depends only on the
    // dataset and the per-split seed.
    let mut partitions = Vec::with_capacity(config.splits);
    let mut split_infos = Vec::with_capacity(config.splits);
    for index in 0..config.splits {
        let seed = config.seed.wrapping_add(index as u64);
        let (train, test) = split(&dataset, config.train_per_class, seed)?;
        split_infos.push(SplitInfo {
            index,
            seed,
            digest: split_digest(&train, &test),
        });
        partitions.push((seed, train, test));
    }

    let mut rows = Vec::with_capacity(models.len());
    let mut timing = Vec::new();
    for &model in &models {
        let mut per_split = Vec::with_capacity(partitions.len());
        let mut fit_ms_total = 0.0;
        let mut classify_ms_total = 0.0;
        let mut samples_total = 0usize;
        for (seed, train, test) in &partitions {
            let params = ModelParams {
                lambda: config.lambda,
                l1_tol: config.l1_tol,
                l1_max_iter: config.l1_max_iter,
                block_sizes: config.block_sizes.clone(),
                dl_max_iters: config.dl_max_iters,
                dl_rel_tol: config.dl_rel_tol,
                classify_lambda: config.classify_lambda,
                dl_seed: *seed,
            };
            let run = run_model(model, train, test, &params)?;
            per_split.push(run.batch.accuracy);
            fit_ms_total += run.fit_ms;
            classify_ms_total += run.classify_ms;
            samples_total += test.num_samples();
        }
        let mean_accuracy = per_split.iter().sum::<f64>() / per_split.len() as f64;
        let mean_fit_ms = fit_ms_total / partitions.len() as f64;
        let test_ms_per_sample = classify_ms_total / samples_total.max(1) as f64;
        eprintln!(
            "{:<8} mean accuracy {:.4}  fit {:.1} ms  test {:.4} ms/sample",
            model.as_str(),
            mean_accuracy,
            mean_fit_ms,
            test_ms_per_sample
        );
        timing.push((model, mean_fit_ms, test_ms_per_sample));
        rows.push(ModelRow {
            model,
            mean_accuracy,
            per_split_accuracy: per_split,
        });
    }

    if let Some(csv_path) = overlay(args.out_csv, file.out_csv) {
        let mut text = String::from("model,mean_accuracy,fit_ms,test_ms_per_sample\n");
        for (row, (model, fit_ms, test_ms)) in rows.iter().zip(&timing) {
            debug_assert_eq!(row.model, *model);
            text.push_str(&format!(
                "{},{},{},{}\n",
                row.model.as_str(),
                row.mean_accuracy,
                fit_ms,
                test_ms
            ));
        }
        write_atomic(&csv_path, text.as_bytes())?;
    }

    let out = overlay(args.out_json, file.out_json);
    let mut envelope = Envelope::new(
        "compare",
        config,
        CompareResults {
            splits: split_infos,
            models: rows,
        },
    );
    for (model, fit_ms, test_ms) in timing {
        envelope.timing(&format!("fit_ms.{}", model.as_str()), fit_ms);
        envelope.timing(&format!("test_ms_per_sample.{}", model.as_str()), test_ms);
    }
    emit(out.as_ref(), &envelope.to_json()?)
}
