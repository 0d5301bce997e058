//! Collaborative-representation classification toolkit.
//!
//! Codes a test sample as a linear combination of training samples from
//! all classes jointly and classifies by which class's portion best
//! explains it. Two regularizations of the coding step are provided —
//! sparse (l1) and non-sparse (l2) — together with a dictionary-learning
//! algorithm for the non-sparse variant and the selection metrics that
//! predict, from dataset statistics alone, which regularization will
//! perform better.
//!
//! Modules:
//! - [`dataset`]: labeled sample matrices, CSV I/O, splits, synthetic data;
//! - [`solvers`]: ridge and lasso solvers with optimality certificates;
//! - [`crc`]: the two collaborative classifiers over raw training data;
//! - [`dictlearn`]: discriminative dictionary learning with closed-form
//!   alternating updates and dictionary-based classification;
//! - [`metrics`]: baseline classifier, accuracy/rank-k, selection scores;
//! - [`benchmarks`]: published reference statistics for validating the
//!   metrics pipeline.

pub mod benchmarks;
pub mod crc;
pub mod dataset;
pub mod dictlearn;
pub mod error;
pub mod metrics;
pub mod solvers;

pub use error::{Error, Result};
