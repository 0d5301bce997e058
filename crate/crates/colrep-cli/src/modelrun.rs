//! One place that fits and runs a chosen model on a train/test split, with
//! wall-clock timings; shared by `eval`, `select`, and `compare`.

use std::time::Instant;

use colrep::crc::{
    batch_classify_dataset, classify_crc_l1, classify_crc_l2, fit_crc_l2, BatchResult, Prediction,
};
use colrep::dataset::LabeledDataset;
use colrep::dictlearn::{classify_set, fit_dlnscr, DlClassifier, DlConfig, SetRule};
use colrep::metrics::mpd_classify;
use nalgebra::DMatrix;
use serde::Serialize;

use crate::cli_error::{usage, CliResult};
use crate::opts::ModelKind;
use crate::report::millis;

#[derive(Debug, Clone)]
pub struct ModelParams {
    pub lambda: f64,
    pub l1_tol: f64,
    pub l1_max_iter: usize,
    pub block_sizes: Option<Vec<usize>>,
    pub dl_max_iters: usize,
    pub dl_rel_tol: f64,
    /// Regularizer used at classification time for dl-nscr; defaults to the
    /// fit regularizer.
    pub classify_lambda: Option<f64>,
    pub dl_seed: u64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            lambda: 1e-4,
            l1_tol: 1e-6,
            l1_max_iter: 100_000,
            block_sizes: None,
            dl_max_iters: 50,
            dl_rel_tol: 1e-6,
            classify_lambda: None,
            dl_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DlFitInfo {
    pub converged: bool,
    pub iterations: usize,
    pub fallback_count: usize,
}

pub struct SplitRun {
    pub batch: BatchResult,
    pub fit_ms: f64,
    pub classify_ms: f64,
    pub dl: Option<DlFitInfo>,
}

/// Fits (when the model has a training step) and classifies every test
/// sample; classification is per-sample, order-preserving.
pub fn run_model(
    model: ModelKind,
    train: &LabeledDataset,
    test: &LabeledDataset,
    params: &ModelParams,
) -> CliResult<SplitRun> {
    match model {
        ModelKind::Mpd => {
            let started = Instant::now();
            let batch = batch_classify_dataset(
                |y| mpd_classify(train, &DMatrix::from_column_slice(y.len(), 1, y.as_slice())),
                test,
            )?;
            Ok(SplitRun {
                batch,
                fit_ms: 0.0,
                classify_ms: millis(started.elapsed()),
                dl: None,
            })
        }
        ModelKind::CrcL1 => {
            let started = Instant::now();
            let batch = batch_classify_dataset(
                |y| classify_crc_l1(train, y, params.lambda, params.l1_tol, params.l1_max_iter),
                test,
            )?;
            Ok(SplitRun {
                batch,
                fit_ms: 0.0,
                classify_ms: millis(started.elapsed()),
                dl: None,
            })
        }
        ModelKind::CrcL2 => {
            let fit_started = Instant::now();
            let fitted = fit_crc_l2(train, params.lambda)?;
            let fit_ms = millis(fit_started.elapsed());
            let started = Instant::now();
            let batch = batch_classify_dataset(|y| classify_crc_l2(&fitted, y), test)?;
            Ok(SplitRun {
                batch,
                fit_ms,
                classify_ms: millis(started.elapsed()),
                dl: None,
            })
        }
        ModelKind::DlNscr => {
            let block_sizes = params
                .block_sizes
                .clone()
                .ok_or_else(|| usage("dl-nscr requires dictionary block sizes"))?;
            let mut config = DlConfig::new(params.lambda, block_sizes);
            config.max_iters = params.dl_max_iters;
            config.rel_tol = params.dl_rel_tol;
            config.seed = params.dl_seed;
            let fit_started = Instant::now();
            let (dict, _, trace) = fit_dlnscr(train, &config)?;
            let fit_ms = millis(fit_started.elapsed());
            let info = DlFitInfo {
                converged: trace.converged,
                iterations: trace.iterations,
                fallback_count: trace.fallback_count,
            };
            let classify_lambda = params.classify_lambda.unwrap_or(params.lambda);
            let classifier = DlClassifier::new(dict, classify_lambda)?;
            let started = Instant::now();
            let batch = batch_classify_dataset(|y| classifier.classify(y), test)?;
            Ok(SplitRun {
                batch,
                fit_ms,
                classify_ms: millis(started.elapsed()),
                dl: Some(info),
            })
        }
    }
}

/// Set-based evaluation: each class's test columns are classified jointly
/// as one query set. Returns one prediction per class plus the truths
/// (the class ids themselves).
pub fn run_model_set(
    model: ModelKind,
    train: &LabeledDataset,
    test: &LabeledDataset,
    params: &ModelParams,
    rule: SetRule,
) -> CliResult<(SplitRun, Vec<usize>)> {
    let truths: Vec<usize> = (1..=test.num_classes()).collect();
    let score = |predictions: Vec<Prediction>| -> BatchResult {
        let correct = predictions
            .iter()
            .zip(&truths)
            .filter(|(p, t)| p.label == **t)
            .count();
        BatchResult {
            accuracy: correct as f64 / predictions.len() as f64,
            predictions,
        }
    };
    match model {
        ModelKind::Mpd => {
            let started = Instant::now();
            let mut predictions = Vec::with_capacity(test.num_classes());
            for class in 1..=test.num_classes() {
                predictions.push(mpd_classify(train, &test.class_submatrix(class))?);
            }
            Ok((
                SplitRun {
                    batch: score(predictions),
                    fit_ms: 0.0,
                    classify_ms: millis(started.elapsed()),
                    dl: None,
                },
                truths,
            ))
        }
        ModelKind::DlNscr => {
            let block_sizes = params
                .block_sizes
                .clone()
                .ok_or_else(|| usage("dl-nscr requires dictionary block sizes"))?;
            let mut config = DlConfig::new(params.lambda, block_sizes);
            config.max_iters = params.dl_max_iters;
            config.rel_tol = params.dl_rel_tol;
            config.seed = params.dl_seed;
            let fit_started = Instant::now();
            let (dict, _, trace) = fit_dlnscr(train, &config)?;
            let fit_ms = millis(fit_started.elapsed());
            let info = DlFitInfo {
                converged: trace.converged,
                iterations: trace.iterations,
                fallback_count: trace.fallback_count,
            };
            let classify_lambda = params.classify_lambda.unwrap_or(params.lambda);
            let started = Instant::now();
            let mut predictions = Vec::with_capacity(test.num_classes());
            for class in 1..=test.num_classes() {
                predictions.push(classify_set(
                    &dict,
                    classify_lambda,
                    &test.class_submatrix(class),
                    rule,
                )?);
            }
            Ok((
                SplitRun {
                    batch: score(predictions),
                    fit_ms,
                    classify_ms: millis(started.elapsed()),
                    dl: Some(info),
                },
                truths,
            ))
        }
        other => Err(usage(format!(
            "set-based evaluation is not supported for {}",
            other.as_str()
        ))),
    }
}
