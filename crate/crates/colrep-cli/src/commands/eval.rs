use std::path::PathBuf;

use clap::Args;
use colrep::dataset::split;
use colrep::metrics::rank_k_accuracy;
use serde::{Deserialize, Serialize};

use crate::cli_error::{usage, CliResult};
use crate::modelrun::{run_model, run_model_set, DlFitInfo, ModelParams, SplitRun};
use crate::opts::{load_config, load_dataset, overlay, resolve_block_sizes, ModelKind, SetRuleOpt};
use crate::report::{emit, split_digest, Envelope};

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct EvalArgs {
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Dataset CSV.
    #[arg(long)]
    pub data: Option<PathBuf>,

    /// Name of the label column in the CSV header.
    #[arg(long)]
    pub label_column: Option<String>,

    /// Classifier to evaluate.
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,

    /// Training samples drawn per class in each split.
    #[arg(long)]
    pub train_per_class: Option<usize>,

    /// Number of seeded splits to average over.
    #[arg(long)]
    pub splits: Option<usize>,

    /// Base seed; split s uses seed + s.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Rescale every sample to unit l2 norm before splitting.
    #[arg(long)]
    #[serde(skip)]
    pub normalize: bool,
    #[arg(skip)]
    #[serde(rename = "normalize")]
    pub normalize_config: Option<bool>,

    /// Coding regularizer (l2 weight, l1 weight, or dl-nscr lambda1).
    #[arg(long)]
    pub lambda: Option<f64>,

    /// Stationarity tolerance of the l1 solver.
    #[arg(long)]
    pub l1_tol: Option<f64>,

    #[arg(long)]
    pub l1_max_iter: Option<usize>,

    /// Uniform dictionary atoms per class (dl-nscr only).
    #[arg(long)]
    pub block_size: Option<usize>,

    /// Comma-separated per-class atom counts (dl-nscr only).
    #[arg(long)]
    pub block_sizes: Option<String>,

    #[arg(long)]
    pub dl_max_iters: Option<usize>,

    #[arg(long)]
    pub dl_rel_tol: Option<f64>,

    /// Classification-time regularizer for dl-nscr (defaults to --lambda).
    #[arg(long)]
    pub classify_lambda: Option<f64>,

    /// Also report rank-k accuracy for this k.
    #[arg(long)]
    pub rank_k: Option<usize>,

    /// Classify each class's test columns jointly as one set (mpd and
    /// dl-nscr only) instead of sample by sample.
    #[arg(long)]
    #[serde(skip)]
    pub set_eval: bool,
    #[arg(skip)]
    #[serde(rename = "set-eval")]
    pub set_eval_config: Option<bool>,

    /// Set residual rule for dl-nscr set classification.
    #[arg(long, value_enum)]
    pub set_rule: Option<SetRuleOpt>,

    /// Report JSON path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct EvalConfig {
    data: PathBuf,
    label_column: String,
    model: ModelKind,
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
    rank_k: Option<usize>,
    set_eval: bool,
    set_rule: SetRuleOpt,
}

#[derive(Debug, Serialize)]
struct SplitReport {
    index: usize,
    seed: u64,
    digest: String,
    train_samples: usize,
    test_samples: usize,
    accuracy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_k_accuracy: Option<f64>,
    non_converged_codings: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    dl_fit: Option<DlFitInfo>,
}

#[derive(Debug, Serialize)]
struct EvalResults {
    /// Original label names in class-id order (id i is names[i-1]).
    class_names: Vec<String>,
    splits: Vec<SplitReport>,
    mean_accuracy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_rank_k_accuracy: Option<f64>,
}

pub fn run(args: EvalArgs) -> CliResult<()> {
    let file: EvalArgs = match &args.config {
        Some(path) => load_config(path)?,
        None => EvalArgs::default(),
    };
    let model = overlay(args.model, file.model).ok_or_else(|| usage("--model is required"))?;
    let data = overlay(args.data, file.data).ok_or_else(|| usage("--data is required"))?;
    let label_column =
        overlay(args.label_column, file.label_column).unwrap_or_else(|| "label".to_string());
    let normalize = args.normalize || file.normalize_config.unwrap_or(false);
    let uniform_block = overlay(args.block_size, file.block_size);
    let explicit_blocks = overlay(args.block_sizes, file.block_sizes);
    if model != ModelKind::DlNscr && (uniform_block.is_some() || explicit_blocks.is_some()) {
        return Err(usage("dictionary block sizes are only meaningful for dl-nscr"));
    }
    let splits_requested = overlay(args.splits, file.splits).unwrap_or(1);
    if splits_requested == 0 {
        return Err(usage("--splits must be at least 1"));
    }

    let dataset = load_dataset(&data, &label_column, normalize)?;
    let block_sizes = if model == ModelKind::DlNscr {
        Some(resolve_block_sizes(
            uniform_block,
            explicit_blocks.as_deref(),
            dataset.num_classes(),
        )?)
    } else {
        None
    };

    let config = EvalConfig {
        data,
        label_column,
        model,
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
        rank_k: overlay(args.rank_k, file.rank_k),
        set_eval: args.set_eval || file.set_eval_config.unwrap_or(false),
        set_rule: overlay(args.set_rule, file.set_rule).unwrap_or(SetRuleOpt::ConfusionEnergy),
    };
    if config.set_eval && !matches!(model, ModelKind::Mpd | ModelKind::DlNscr) {
        return Err(usage("--set-eval is only supported for mpd and dl-nscr"));
    }
    if let Some(k) = config.rank_k {
        if k == 0 || k > dataset.num_classes() {
            return Err(usage(format!(
                "--rank-k must be in 1..={}",
                dataset.num_classes()
            )));
        }
    }
    if config.train_per_class == 0 || config.train_per_class >= dataset.min_class_count() {
        return Err(usage(format!(
            "--train-per-class must be in 1..{} for this dataset",
            dataset.min_class_count()
        )));
    }

    let mut splits_out = Vec::with_capacity(config.splits);
    let mut total_fit_ms = 0.0;
    let mut total_classify_ms = 0.0;
    let mut total_test_samples = 0usize;

    for index in 0..config.splits {
        let seed = config.seed.wrapping_add(index as u64);
        let (train, test) = split(&dataset, config.train_per_class, seed)?;
        let params = ModelParams {
            lambda: config.lambda,
            l1_tol: config.l1_tol,
            l1_max_iter: config.l1_max_iter,
            block_sizes: config.block_sizes.clone(),
            dl_max_iters: config.dl_max_iters,
            dl_rel_tol: config.dl_rel_tol,
            classify_lambda: config.classify_lambda,
            dl_seed: seed,
        };
        let (run, truths): (SplitRun, Vec<usize>) = if config.set_eval {
            let (run, truths) =
                run_model_set(config.model, &train, &test, &params, config.set_rule.into())?;
            (run, truths)
        } else {
            (
                run_model(config.model, &train, &test, &params)?,
                test.labels().to_vec(),
            )
        };
        let rank_k = match config.rank_k {
            Some(k) => {
                let lists: Vec<Vec<f64>> = run
                    .batch
                    .predictions
                    .iter()
                    .map(|p| p.residuals.clone())
                    .collect();
                Some(rank_k_accuracy(&lists, &truths, k)?)
            }
            None => None,
        };
        total_fit_ms += run.fit_ms;
        total_classify_ms += run.classify_ms;
        total_test_samples += test.num_samples();
        splits_out.push(SplitReport {
            index,
            seed,
            digest: split_digest(&train, &test),
            train_samples: train.num_samples(),
            test_samples: test.num_samples(),
            accuracy: run.batch.accuracy,
            rank_k_accuracy: rank_k,
            non_converged_codings: run
                .batch
                .predictions
                .iter()
                .filter(|p| !p.solver_converged)
                .count(),
            dl_fit: run.dl,
        });
    }

    let mean_accuracy =
        splits_out.iter().map(|s| s.accuracy).sum::<f64>() / splits_out.len() as f64;
    let mean_rank_k = config.rank_k.map(|_| {
        splits_out
            .iter()
            .filter_map(|s| s.rank_k_accuracy)
            .sum::<f64>()
            / splits_out.len() as f64
    });
    eprintln!(
        "{}: mean accuracy {:.4} over {} split(s)",
        config.model.as_str(),
        mean_accuracy,
        splits_out.len()
    );

    let results = EvalResults {
        class_names: dataset.class_names().to_vec(),
        splits: splits_out,
        mean_accuracy,
        mean_rank_k_accuracy: mean_rank_k,
    };
    let splits = config.splits;
    let out = overlay(args.out, file.out);
    let mut envelope = Envelope::new("eval", config, results);
    envelope.timing("mean_fit_ms", total_fit_ms / splits as f64);
    envelope.timing(
        "classify_ms_per_sample",
        total_classify_ms / total_test_samples.max(1) as f64,
    );
    emit(out.as_ref(), &envelope.to_json()?)
}
