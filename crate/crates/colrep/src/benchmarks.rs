//! Published statistics for thirteen visual-recognition benchmark
//! settings: feature dimensionality, class count, training-set size, and
//! the measured accuracies of the minimum point-wise-distance baseline and
//! the two collaborative classifiers.
//!
//! These raw numbers feed the selection-metrics pipeline (`select
//! --from-table` in the CLI) so its derived columns can be validated
//! without any image data.

/// Raw statistics for one benchmark setting.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRow {
    pub name: &'static str,
    /// Feature dimensionality `d`.
    pub dim: usize,
    /// Number of classes.
    pub classes: usize,
    /// Training samples per class (approximate for unevenly sampled sets).
    pub samples_per_class: f64,
    /// Total number of training samples `n`.
    pub num_train: usize,
    pub mpd_accuracy: f64,
    pub crc_l1_accuracy: f64,
    pub crc_l2_accuracy: f64,
    /// Settings with too few trials or extreme within-class variation,
    /// conventionally excluded from trend fits.
    pub starred: bool,
}

/// The thirteen reference settings.
pub const REFERENCE_ROWS: [BenchmarkRow; 13] = [
    BenchmarkRow {
        name: "Extended Yale B",
        dim: 504,
        classes: 38,
        samples_per_class: 32.0,
        num_train: 1207,
        mpd_accuracy: 0.653,
        crc_l1_accuracy: 0.951,
        crc_l2_accuracy: 0.976,
        starred: false,
    },
    BenchmarkRow {
        name: "AR",
        dim: 300,
        classes: 100,
        samples_per_class: 7.0,
        num_train: 700,
        mpd_accuracy: 0.714,
        crc_l1_accuracy: 0.898,
        crc_l2_accuracy: 0.919,
        starred: true,
    },
    BenchmarkRow {
        name: "KTH-TIPS",
        dim: 1180,
        classes: 10,
        samples_per_class: 40.0,
        num_train: 400,
        mpd_accuracy: 0.920,
        crc_l1_accuracy: 0.957,
        crc_l2_accuracy: 0.971,
        starred: false,
    },
    BenchmarkRow {
        name: "CUReT",
        dim: 1180,
        classes: 61,
        samples_per_class: 46.0,
        num_train: 2806,
        mpd_accuracy: 0.936,
        crc_l1_accuracy: 0.824,
        crc_l2_accuracy: 0.933,
        starred: false,
    },
    BenchmarkRow {
        name: "Swedish Leaf",
        dim: 1180,
        classes: 15,
        samples_per_class: 25.0,
        num_train: 375,
        mpd_accuracy: 0.923,
        crc_l1_accuracy: 0.958,
        crc_l2_accuracy: 0.991,
        starred: false,
    },
    BenchmarkRow {
        name: "Food",
        dim: 3540,
        classes: 61,
        samples_per_class: 12.0,
        num_train: 732,
        mpd_accuracy: 0.220,
        crc_l1_accuracy: 0.311,
        crc_l2_accuracy: 0.349,
        starred: true,
    },
    BenchmarkRow {
        name: "iLIDS-MA10",
        dim: 400,
        classes: 40,
        samples_per_class: 10.0,
        num_train: 400,
        mpd_accuracy: 0.500,
        crc_l1_accuracy: 0.750,
        crc_l2_accuracy: 0.778,
        starred: false,
    },
    BenchmarkRow {
        name: "iLIDS-MA23",
        dim: 400,
        classes: 40,
        samples_per_class: 23.0,
        num_train: 920,
        mpd_accuracy: 0.593,
        crc_l1_accuracy: 0.785,
        crc_l2_accuracy: 0.790,
        starred: false,
    },
    BenchmarkRow {
        name: "iLIDS-MA46",
        dim: 400,
        classes: 40,
        samples_per_class: 46.0,
        num_train: 1840,
        mpd_accuracy: 0.625,
        crc_l1_accuracy: 0.800,
        crc_l2_accuracy: 0.825,
        starred: true,
    },
    BenchmarkRow {
        name: "iLIDS-AA10",
        dim: 400,
        classes: 100,
        samples_per_class: 10.0,
        num_train: 1000,
        mpd_accuracy: 0.238,
        crc_l1_accuracy: 0.658,
        crc_l2_accuracy: 0.677,
        starred: false,
    },
    BenchmarkRow {
        name: "iLIDS-AA23",
        dim: 400,
        classes: 100,
        samples_per_class: 23.0,
        num_train: 2300,
        mpd_accuracy: 0.270,
        crc_l1_accuracy: 0.731,
        crc_l2_accuracy: 0.690,
        starred: false,
    },
    BenchmarkRow {
        name: "iLIDS-AA46",
        dim: 400,
        classes: 100,
        samples_per_class: 46.0,
        num_train: 4600,
        mpd_accuracy: 0.351,
        crc_l1_accuracy: 0.779,
        crc_l2_accuracy: 0.667,
        starred: false,
    },
    BenchmarkRow {
        name: "CAVIAR4REID",
        dim: 400,
        classes: 50,
        samples_per_class: 5.0,
        num_train: 250,
        mpd_accuracy: 0.190,
        crc_l1_accuracy: 0.478,
        crc_l2_accuracy: 0.514,
        starred: true,
    },
];
