//! Collaborative-representation classifiers over the raw training matrix:
//! the sparse l1 variant (iterative coding, per-class residual) and the
//! non-sparse l2 variant (precomputed projector, coefficient-normalized
//! residual).

use nalgebra::{DMatrix, DVector};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::solvers::{lasso_prox, RidgeProjector};

/// Guard for the coefficient-norm denominator of the normalized residual;
/// zero blocks occur for classes the coding leaves unused.
pub const BLOCK_NORM_GUARD: f64 = 1e-12;

/// A classification outcome: the winning class plus the per-class evidence
/// it was derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    /// Winning class id (1-based), the argmin of `residuals` with
    /// lowest-index tie-break.
    pub label: usize,
    /// One dissimilarity per class.
    pub residuals: Vec<f64>,
    /// Coefficient block l2 norms per class; empty for classifiers without
    /// a coding step.
    pub block_norms: Vec<f64>,
    /// False when an iterative coding step hit its budget; the label is
    /// then best-effort.
    pub solver_converged: bool,
}

impl Prediction {
    /// Builds a prediction from per-class residuals, enforcing the
    /// argmin/tie-break invariant.
    pub fn from_residuals(
        residuals: Vec<f64>,
        block_norms: Vec<f64>,
        solver_converged: bool,
    ) -> Result<Self> {
        if residuals.is_empty() {
            return Err(Error::InvalidParameter(
                "prediction needs at least one class residual".into(),
            ));
        }
        if residuals.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::Numerical(
                "class residuals must be finite and nonnegative".into(),
            ));
        }
        let label = argmin_lowest_index(&residuals);
        Ok(Self {
            label,
            residuals,
            block_norms,
            solver_converged,
        })
    }
}

/// Index (1-based) of the smallest value, lowest index on ties.
pub fn argmin_lowest_index(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best + 1
}

/// Fitted non-sparse collaborative classifier: the training matrix plus the
/// ridge projector precomputed over it.
#[derive(Debug, Clone)]
pub struct CrcL2Model {
    train: LabeledDataset,
    class_mats: Vec<DMatrix<f64>>,
    projector: RidgeProjector,
    lambda: f64,
}

impl CrcL2Model {
    pub fn train(&self) -> &LabeledDataset {
        &self.train
    }

    pub fn projector(&self) -> &RidgeProjector {
        &self.projector
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Precomputes the coding projector over the training matrix.
pub fn fit_crc_l2(train: &LabeledDataset, lambda: f64) -> Result<CrcL2Model> {
    let projector = RidgeProjector::new(train.features(), lambda)?;
    let class_mats = (1..=train.num_classes())
        .map(|c| train.class_submatrix(c))
        .collect();
    Ok(CrcL2Model {
        train: train.clone(),
        class_mats,
        projector,
        lambda,
    })
}

/// Classifies one sample with the non-sparse model: coefficients `P y`,
/// then per class the reconstruction residual normalized by the
/// coefficient block norm (guarded below by [`BLOCK_NORM_GUARD`]).
pub fn classify_crc_l2(model: &CrcL2Model, sample: &DVector<f64>) -> Result<Prediction> {
    if sample.len() != model.train.dim() {
        return Err(Error::DimensionMismatch(format!(
            "sample has length {}, model expects {}",
            sample.len(),
            model.train.dim()
        )));
    }
    let coeffs = model.projector.apply(sample)?;
    let mut residuals = Vec::with_capacity(model.train.num_classes());
    let mut block_norms = Vec::with_capacity(model.train.num_classes());
    for class in 1..=model.train.num_classes() {
        let cols = model.train.class_columns(class);
        let block = DVector::from_fn(cols.len(), |k, _| coeffs[cols[k]]);
        let norm = block.norm();
        let reconstruction = &model.class_mats[class - 1] * &block;
        let residual = (sample - reconstruction).norm_squared() / norm.max(BLOCK_NORM_GUARD);
        residuals.push(residual);
        block_norms.push(norm);
    }
    Prediction::from_residuals(residuals, block_norms, true)
}

/// Classifies one sample with the sparse model: l1 coding over the full
/// training matrix, then the plain (unnormalized) per-class reconstruction
/// residual.
///
/// A non-converged coding step is surfaced on the prediction, not as an
/// error.
pub fn classify_crc_l1(
    train: &LabeledDataset,
    sample: &DVector<f64>,
    lambda: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Prediction> {
    if sample.len() != train.dim() {
        return Err(Error::DimensionMismatch(format!(
            "sample has length {}, training set expects {}",
            sample.len(),
            train.dim()
        )));
    }
    let coding = lasso_prox(train.features(), sample, lambda, tol, max_iter)?;
    let mut residuals = Vec::with_capacity(train.num_classes());
    let mut block_norms = Vec::with_capacity(train.num_classes());
    for class in 1..=train.num_classes() {
        let cols = train.class_columns(class);
        let block = DVector::from_fn(cols.len(), |k, _| coding.coefficients[cols[k]]);
        let reconstruction = train.class_submatrix(class) * &block;
        residuals.push((sample - reconstruction).norm_squared());
        block_norms.push(block.norm());
    }
    Prediction::from_residuals(residuals, block_norms, coding.converged)
}

/// Per-sample predictions plus the top-1 accuracy over a batch.
#[derive(Debug, Clone)]
pub struct BatchResult {
    pub predictions: Vec<Prediction>,
    pub accuracy: f64,
}

/// Runs a classifier over every column of `samples`, order-preserving, and
/// summarizes top-1 accuracy against `truths`.
pub fn batch_classify<F>(
    mut classify: F,
    samples: &DMatrix<f64>,
    truths: &[usize],
) -> Result<BatchResult>
where
    F: FnMut(&DVector<f64>) -> Result<Prediction>,
{
    if samples.ncols() == 0 {
        return Err(Error::EmptyDataset);
    }
    if samples.ncols() != truths.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} samples but {} truth labels",
            samples.ncols(),
            truths.len()
        )));
    }
    let mut predictions = Vec::with_capacity(samples.ncols());
    let mut correct = 0usize;
    for (col, &truth) in truths.iter().enumerate() {
        let prediction = classify(&samples.column(col).into_owned())?;
        if prediction.label == truth {
            correct += 1;
        }
        predictions.push(prediction);
    }
    Ok(BatchResult {
        accuracy: correct as f64 / truths.len() as f64,
        predictions,
    })
}

/// [`batch_classify`] over a labeled dataset's own columns and labels.
pub fn batch_classify_dataset<F>(classify: F, test: &LabeledDataset) -> Result<BatchResult>
where
    F: FnMut(&DVector<f64>) -> Result<Prediction>,
{
    batch_classify(classify, test.features(), test.labels())
}
