use std::path::{Path, PathBuf};

use clap::Args;
use colrep::dataset::split;
use colrep::metrics::{
    build_selection_report, fit_trend, SelectionReport, SelectionSettings, TrendFit,
    DEFAULT_SCORE_THRESHOLD,
};
use serde::{Deserialize, Serialize};

use crate::cli_error::{usage, CliError, CliResult};
use crate::opts::{load_config, load_dataset, overlay};
use crate::report::{emit, millis, split_digest, write_atomic, Envelope};

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct SelectArgs {
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Dataset CSV (mutually exclusive with --from-table).
    #[arg(long)]
    pub data: Option<PathBuf>,

    #[arg(long)]
    pub label_column: Option<String>,

    #[arg(long)]
    pub train_per_class: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,

    /// Rescale every sample to unit l2 norm before splitting.
    #[arg(long)]
    #[serde(skip)]
    pub normalize: bool,
    #[arg(skip)]
    #[serde(rename = "normalize")]
    pub normalize_config: Option<bool>,

    /// Also run both collaborative classifiers to measure the error
    /// reduction rate.
    #[arg(long)]
    #[serde(skip)]
    pub with_crc: bool,
    #[arg(skip)]
    #[serde(rename = "with-crc")]
    pub with_crc_config: Option<bool>,

    /// Ridge weight for the non-sparse classifier.
    #[arg(long)]
    pub lambda: Option<f64>,

    /// l1 weight for the sparse classifier.
    #[arg(long)]
    pub l1_lambda: Option<f64>,

    #[arg(long)]
    pub l1_tol: Option<f64>,

    #[arg(long)]
    pub l1_max_iter: Option<usize>,

    /// Selection-score threshold (non-sparse at or above it).
    #[arg(long)]
    pub threshold: Option<f64>,

    /// CSV of raw benchmark statistics to push through the metrics
    /// pipeline instead of running models on a dataset.
    #[arg(long)]
    pub from_table: Option<PathBuf>,

    /// Keep starred rows in the trend fits.
    #[arg(long)]
    #[serde(skip)]
    pub include_starred: bool,
    #[arg(skip)]
    #[serde(rename = "include-starred")]
    pub include_starred_config: Option<bool>,

    /// Report JSON path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Optional CSV rendering of the per-dataset table.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
}

/// One raw row of a `--from-table` file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawTableRow {
    pub name: String,
    pub dim: usize,
    pub classes: usize,
    pub samples_per_class: f64,
    pub num_train: usize,
    pub mpd_accuracy: f64,
    pub crc_l1_accuracy: f64,
    pub crc_l2_accuracy: f64,
    pub starred: bool,
}

#[derive(Debug, Serialize)]
pub struct TableRowReport {
    pub name: String,
    pub samples_per_class: f64,
    pub starred: bool,
    #[serde(flatten)]
    pub report: SelectionReport,
}

#[derive(Debug, Serialize)]
struct TrendSection {
    points_used: usize,
    starred_excluded: bool,
    score: TrendFit,
    fdr_over_n: TrendFit,
}

#[derive(Debug, Serialize)]
struct FromTableResults {
    rows: Vec<TableRowReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trend: Option<TrendSection>,
}

#[derive(Debug, Serialize)]
struct FromTableConfig {
    from_table: PathBuf,
    threshold: f64,
    include_starred: bool,
}

#[derive(Debug, Serialize)]
struct DatasetConfig {
    data: PathBuf,
    label_column: String,
    train_per_class: usize,
    seed: u64,
    normalize: bool,
    with_crc: bool,
    lambda: f64,
    l1_lambda: f64,
    l1_tol: f64,
    l1_max_iter: usize,
    threshold: f64,
}

#[derive(Debug, Serialize)]
struct DatasetResults {
    digest: String,
    #[serde(flatten)]
    report: SelectionReport,
}

pub fn parse_table(path: &Path) -> CliResult<Vec<RawTableRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::Csv {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut rows = Vec::new();
    for record in reader.deserialize::<RawTableRow>() {
        rows.push(record.map_err(|e| CliError::Csv {
            path: path.to_path_buf(),
            source: e,
        })?);
    }
    if rows.is_empty() {
        return Err(usage(format!(
            "'{}' contains no benchmark rows",
            path.display()
        )));
    }
    Ok(rows)
}

/// Renders the per-dataset table: statistics, then prediction columns,
/// then measured performance.
pub fn render_table_csv(rows: &[TableRowReport]) -> String {
    let mut out = String::from(
        "name,dim,classes,samples_per_class,num_train,mpd_accuracy,fdr,fdr_x_d,fdr_over_n,score,crc_l1_accuracy,crc_l2_accuracy,err,recommendation\n",
    );
    for row in rows {
        let r = &row.report;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            row.name,
            r.dim,
            r.num_classes,
            row.samples_per_class,
            r.num_train,
            r.mpd_accuracy,
            r.fdr,
            r.score_fdr_d,
            r.score_fdr_over_n,
            r.score,
            opt(r.crc_l1_accuracy),
            opt(r.crc_l2_accuracy),
            opt(r.err),
            serde_json::to_value(r.recommendation)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
        ));
    }
    out
}

fn run_from_table(
    args: &SelectArgs,
    table: PathBuf,
    threshold: f64,
    out: Option<PathBuf>,
    out_csv: Option<PathBuf>,
) -> CliResult<()> {
    let include_starred = args.include_starred
        || match &args.config {
            Some(path) => load_config::<SelectArgs>(path)?
                .include_starred_config
                .unwrap_or(false),
            None => false,
        };
    let started = std::time::Instant::now();
    let raw = parse_table(&table)?;
    let mut rows = Vec::with_capacity(raw.len());
    for row in &raw {
        let report = SelectionReport::from_raw(
            row.dim,
            row.num_train,
            row.classes,
            row.mpd_accuracy,
            Some((row.crc_l1_accuracy, row.crc_l2_accuracy)),
            threshold,
        )?;
        rows.push(TableRowReport {
            name: row.name.clone(),
            samples_per_class: row.samples_per_class,
            starred: row.starred,
            report,
        });
    }

    let trend_rows: Vec<&TableRowReport> = rows
        .iter()
        .filter(|r| include_starred || !r.starred)
        .collect();
    let trend = if trend_rows.len() >= 2 {
        let errs: Vec<f64> = trend_rows.iter().filter_map(|r| r.report.err).collect();
        let scores: Vec<f64> = trend_rows.iter().map(|r| r.report.score).collect();
        let fdr_over_n: Vec<f64> = trend_rows
            .iter()
            .map(|r| r.report.score_fdr_over_n)
            .collect();
        Some(TrendSection {
            points_used: trend_rows.len(),
            starred_excluded: !include_starred,
            score: fit_trend(&scores, &errs)?,
            fdr_over_n: fit_trend(&fdr_over_n, &errs)?,
        })
    } else {
        None
    };

    if let Some(csv_path) = &out_csv {
        write_atomic(csv_path, render_table_csv(&rows).as_bytes())?;
    }
    eprintln!(
        "selection table: {} rows, threshold {threshold}",
        rows.len()
    );
    let mut envelope = Envelope::new(
        "select",
        FromTableConfig {
            from_table: table,
            threshold,
            include_starred,
        },
        FromTableResults { rows, trend },
    );
    envelope.timing("total_ms", millis(started.elapsed()));
    emit(out.as_ref(), &envelope.to_json()?)
}

pub fn run(args: SelectArgs) -> CliResult<()> {
    let file: SelectArgs = match &args.config {
        Some(path) => load_config(path)?,
        None => SelectArgs::default(),
    };
    let threshold =
        overlay(args.threshold, file.threshold).unwrap_or(DEFAULT_SCORE_THRESHOLD);
    let from_table = overlay(args.from_table.clone(), file.from_table.clone());
    let data = overlay(args.data.clone(), file.data.clone());
    let out = overlay(args.out.clone(), file.out.clone());
    let out_csv = overlay(args.out_csv.clone(), file.out_csv.clone());

    match (data, from_table) {
        (Some(_), Some(_)) => Err(usage("--data and --from-table are mutually exclusive")),
        (None, None) => Err(usage("one of --data or --from-table is required")),
        (None, Some(table)) => run_from_table(&args, table, threshold, out, out_csv),
        (Some(data), None) => {
            let config = DatasetConfig {
                data,
                label_column: overlay(args.label_column, file.label_column)
                    .unwrap_or_else(|| "label".to_string()),
                train_per_class: overlay(args.train_per_class, file.train_per_class)
                    .ok_or_else(|| usage("--train-per-class is required"))?,
                seed: overlay(args.seed, file.seed).unwrap_or(0),
                normalize: args.normalize || file.normalize_config.unwrap_or(false),
                with_crc: args.with_crc || file.with_crc_config.unwrap_or(false),
                lambda: overlay(args.lambda, file.lambda).unwrap_or(1e-4),
                l1_lambda: overlay(args.l1_lambda, file.l1_lambda).unwrap_or(1e-4),
                l1_tol: overlay(args.l1_tol, file.l1_tol).unwrap_or(1e-6),
                l1_max_iter: overlay(args.l1_max_iter, file.l1_max_iter).unwrap_or(100_000),
                threshold,
            };
            let started = std::time::Instant::now();
            let dataset = load_dataset(&config.data, &config.label_column, config.normalize)?;
            if config.train_per_class == 0
                || config.train_per_class >= dataset.min_class_count()
            {
                return Err(usage(format!(
                    "--train-per-class must be in 1..{} for this dataset",
                    dataset.min_class_count()
                )));
            }
            let (train, test) = split(&dataset, config.train_per_class, config.seed)?;
            let settings = SelectionSettings {
                lambda_l2: config.lambda,
                run_crc: config.with_crc,
                lambda_l1: config.l1_lambda,
                l1_tol: config.l1_tol,
                l1_max_iter: config.l1_max_iter,
                threshold,
            };
            let report = build_selection_report(&train, &test, &settings)?;
            eprintln!(
                "selection score {:.3} (threshold {threshold}) -> {:?}",
                report.score, report.recommendation
            );
            let results = DatasetResults {
                digest: split_digest(&train, &test),
                report,
            };
            let mut envelope = Envelope::new("select", config, results);
            envelope.timing("total_ms", millis(started.elapsed()));
            emit(out.as_ref(), &envelope.to_json()?)
        }
    }
}
