//! Model-selection metrics: the minimum point-wise-distance baseline,
//! accuracy and rank-k evaluation, the error-reduction rate between the
//! sparse and non-sparse classifiers, the feature discrimination rate, the
//! selection score with its threshold rule, and a linear trend fit.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::crc::{
    batch_classify_dataset, classify_crc_l1, classify_crc_l2, fit_crc_l2, Prediction,
};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};

/// Default selection-score threshold separating the regimes.
pub const DEFAULT_SCORE_THRESHOLD: f64 = 5.0;

/// Which regularization the selection score predicts to perform better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Recommendation {
    Sparse,
    NonSparse,
}

/// Minimum point-wise-distance classifier: the dissimilarity to a class is
/// the smallest Euclidean distance between any query column and any
/// training column of that class.
pub fn mpd_classify(train: &LabeledDataset, query: &DMatrix<f64>) -> Result<Prediction> {
    if query.ncols() == 0 {
        return Err(Error::EmptyDataset);
    }
    if query.nrows() != train.dim() {
        return Err(Error::DimensionMismatch(format!(
            "query has {} rows, training set expects {}",
            query.nrows(),
            train.dim()
        )));
    }
    let mut dissimilarities = Vec::with_capacity(train.num_classes());
    for class in 1..=train.num_classes() {
        let mut best = f64::INFINITY;
        for &col in train.class_columns(class) {
            let t = train.features().column(col);
            for q in 0..query.ncols() {
                let dist = (query.column(q) - t).norm();
                if dist < best {
                    best = dist;
                }
            }
        }
        dissimilarities.push(best);
    }
    Prediction::from_residuals(dissimilarities, Vec::new(), true)
}

/// Fraction of predictions whose label matches the truth.
pub fn accuracy(predictions: &[Prediction], truths: &[usize]) -> Result<f64> {
    if predictions.len() != truths.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} predictions vs {} truths",
            predictions.len(),
            truths.len()
        )));
    }
    if predictions.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let correct = predictions
        .iter()
        .zip(truths)
        .filter(|(p, t)| p.label == **t)
        .count();
    Ok(correct as f64 / truths.len() as f64)
}

/// Fraction of samples whose true class is among the `k` smallest
/// residuals (ties ranked by lower class index).
pub fn rank_k_accuracy(residual_lists: &[Vec<f64>], truths: &[usize], k: usize) -> Result<f64> {
    if residual_lists.len() != truths.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} residual lists vs {} truths",
            residual_lists.len(),
            truths.len()
        )));
    }
    if residual_lists.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let classes = residual_lists[0].len();
    if k == 0 || k > classes {
        return Err(Error::InvalidParameter(format!(
            "rank k must be in 1..={classes}"
        )));
    }
    let mut hits = 0usize;
    for (residuals, &truth) in residual_lists.iter().zip(truths) {
        if residuals.len() != classes {
            return Err(Error::DimensionMismatch(
                "residual lists have inconsistent lengths".into(),
            ));
        }
        let mut order: Vec<usize> = (0..classes).collect();
        order.sort_by(|&a, &b| {
            residuals[a]
                .partial_cmp(&residuals[b])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        if order.iter().take(k).any(|&i| i + 1 == truth) {
            hits += 1;
        }
    }
    Ok(hits as f64 / truths.len() as f64)
}

/// Error reduction rate from replacing the sparse classifier by the
/// non-sparse one: `(acc_l2 - acc_l1) / (1 - acc_l1)`.
pub fn err(acc_l1: f64, acc_l2: f64) -> Result<f64> {
    for (name, value) in [("acc_l1", acc_l1), ("acc_l2", acc_l2)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be in [0, 1], got {value}"
            )));
        }
    }
    if acc_l1 >= 1.0 {
        return Err(Error::InvalidParameter(
            "error reduction rate is undefined when acc_l1 = 1".into(),
        ));
    }
    Ok((acc_l2 - acc_l1) / (1.0 - acc_l1))
}

/// Feature discrimination rate: baseline accuracy over chance accuracy
/// `1/L`, i.e. `mpd_accuracy * L`.
pub fn fdr(mpd_accuracy: f64, num_classes: usize) -> Result<f64> {
    if num_classes < 2 {
        return Err(Error::InvalidParameter(
            "feature discrimination rate needs at least 2 classes".into(),
        ));
    }
    if !(0.0..=1.0).contains(&mpd_accuracy) {
        return Err(Error::InvalidParameter(format!(
            "mpd accuracy must be in [0, 1], got {mpd_accuracy}"
        )));
    }
    Ok(mpd_accuracy * num_classes as f64)
}

/// Selection score `FDR * d / n`.
pub fn selection_score(fdr_value: f64, dim: usize, num_train: usize) -> Result<f64> {
    if dim == 0 || num_train == 0 {
        return Err(Error::InvalidParameter(
            "selection score needs d >= 1 and n >= 1".into(),
        ));
    }
    Ok(fdr_value * dim as f64 / num_train as f64)
}

/// Non-sparse iff the score reaches the threshold (boundary included).
pub fn recommend(score: f64, threshold: f64) -> Recommendation {
    if score >= threshold {
        Recommendation::NonSparse
    } else {
        Recommendation::Sparse
    }
}

/// Everything the selection workflow derives for one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub dim: usize,
    pub num_train: usize,
    pub num_classes: usize,
    pub mpd_accuracy: f64,
    pub fdr: f64,
    /// `FDR * d`.
    pub score_fdr_d: f64,
    /// `FDR / n`.
    pub score_fdr_over_n: f64,
    /// `FDR * d / n`, the selection score.
    pub score: f64,
    pub crc_l1_accuracy: Option<f64>,
    pub crc_l2_accuracy: Option<f64>,
    pub err: Option<f64>,
    pub threshold: f64,
    pub recommendation: Recommendation,
}

impl SelectionReport {
    /// Assembles a report from raw statistics, computing every derived
    /// column; the constructor is the invariant (`fdr = acc * L`,
    /// `score = fdr * d / n`, threshold rule).
    ///
    /// The error reduction rate is undefined at `acc_l1 = 1`; the report
    /// then keeps the accuracies and leaves `err` unset.
    pub fn from_raw(
        dim: usize,
        num_train: usize,
        num_classes: usize,
        mpd_accuracy: f64,
        crc_accuracies: Option<(f64, f64)>,
        threshold: f64,
    ) -> Result<Self> {
        let fdr_value = fdr(mpd_accuracy, num_classes)?;
        let score = selection_score(fdr_value, dim, num_train)?;
        let (crc_l1_accuracy, crc_l2_accuracy, err_value) = match crc_accuracies {
            Some((l1, l2)) if l1 >= 1.0 => (Some(l1), Some(l2), None),
            Some((l1, l2)) => (Some(l1), Some(l2), Some(err(l1, l2)?)),
            None => (None, None, None),
        };
        Ok(Self {
            dim,
            num_train,
            num_classes,
            mpd_accuracy,
            fdr: fdr_value,
            score_fdr_d: fdr_value * dim as f64,
            score_fdr_over_n: fdr_value / num_train as f64,
            score,
            crc_l1_accuracy,
            crc_l2_accuracy,
            err: err_value,
            threshold,
            recommendation: recommend(score, threshold),
        })
    }
}

/// Settings for [`build_selection_report`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelectionSettings {
    /// Ridge regularizer for the non-sparse classifier.
    pub lambda_l2: f64,
    /// When set, both collaborative classifiers run to produce the error
    /// reduction rate; the l1 coding uses these solver controls.
    pub run_crc: bool,
    pub lambda_l1: f64,
    pub l1_tol: f64,
    pub l1_max_iter: usize,
    pub threshold: f64,
}

impl Default for SelectionSettings {
    fn default() -> Self {
        Self {
            lambda_l2: 1e-4,
            run_crc: false,
            lambda_l1: 1e-4,
            l1_tol: 1e-6,
            l1_max_iter: 100_000,
            threshold: DEFAULT_SCORE_THRESHOLD,
        }
    }
}

/// Runs the baseline classifier (and optionally both collaborative
/// classifiers) on a train/test pair and assembles the selection report.
pub fn build_selection_report(
    train: &LabeledDataset,
    test: &LabeledDataset,
    settings: &SelectionSettings,
) -> Result<SelectionReport> {
    if train.dim() != test.dim() {
        return Err(Error::DimensionMismatch(format!(
            "train dimension {} vs test dimension {}",
            train.dim(),
            test.dim()
        )));
    }
    let mpd = batch_classify_dataset(
        |y| mpd_classify(train, &DMatrix::from_column_slice(y.len(), 1, y.as_slice())),
        test,
    )?;
    let crc_accuracies = if settings.run_crc {
        let model = fit_crc_l2(train, settings.lambda_l2)?;
        let l2 = batch_classify_dataset(|y| classify_crc_l2(&model, y), test)?;
        let l1 = batch_classify_dataset(
            |y| {
                classify_crc_l1(
                    train,
                    y,
                    settings.lambda_l1,
                    settings.l1_tol,
                    settings.l1_max_iter,
                )
            },
            test,
        )?;
        Some((l1.accuracy, l2.accuracy))
    } else {
        None
    };
    SelectionReport::from_raw(
        train.dim(),
        train.num_samples(),
        train.num_classes(),
        mpd.accuracy,
        crc_accuracies,
        settings.threshold,
    )
}

/// Ordinary least-squares line of one series against another.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendFit {
    pub slope: f64,
    pub intercept: f64,
    /// Sum of squared errors of the fit.
    pub sse: f64,
}

/// Fits `errs ~ slope * scores + intercept` by least squares.
pub fn fit_trend(scores: &[f64], errs: &[f64]) -> Result<TrendFit> {
    if scores.len() != errs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} scores vs {} errs",
            scores.len(),
            errs.len()
        )));
    }
    if scores.len() < 2 {
        return Err(Error::InvalidParameter(
            "trend fit needs at least 2 points".into(),
        ));
    }
    let n = scores.len() as f64;
    let mean_x = scores.iter().sum::<f64>() / n;
    let mean_y = errs.iter().sum::<f64>() / n;
    let sxx: f64 = scores.iter().map(|x| (x - mean_x) * (x - mean_x)).sum();
    if sxx == 0.0 {
        return Err(Error::Numerical(
            "trend fit is degenerate: all scores are identical".into(),
        ));
    }
    let sxy: f64 = scores
        .iter()
        .zip(errs)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse = scores
        .iter()
        .zip(errs)
        .map(|(x, y)| {
            let p = intercept + slope * x;
            (y - p) * (y - p)
        })
        .sum();
    Ok(TrendFit {
        slope,
        intercept,
        sse,
    })
}
