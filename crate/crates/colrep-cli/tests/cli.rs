//! End-to-end tests of the `colrep` binary: command behavior, exit codes,
//! file outputs, and determinism of the JSON reports.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use colrep_cli::dict_io::load_dictionary;

fn colrep() -> Command {
    Command::new(env!("CARGO_BIN_EXE_colrep"))
}

fn run_ok(args: &[&str], dir: &Path) -> Output {
    let output = colrep()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    assert!(
        output.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

fn exit_code(args: &[&str], dir: &Path) -> i32 {
    colrep()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
        .status
        .code()
        .unwrap_or(-1)
}

fn json_without_timing(text: &str) -> serde_json::Value {
    let mut value: serde_json::Value = serde_json::from_str(text).expect("valid json");
    value.as_object_mut().expect("object").remove("timing_ms");
    value
}

fn file_json_without_timing(path: &Path) -> serde_json::Value {
    json_without_timing(&std::fs::read_to_string(path).expect("report exists"))
}

fn synth_bench(dir: &Path) -> PathBuf {
    run_ok(
        &[
            "synth",
            "--classes",
            "4",
            "--dim",
            "20",
            "--per-class",
            "12",
            "--separation",
            "6",
            "--seed",
            "9",
            "--out",
            "bench.csv",
        ],
        dir,
    );
    dir.join("bench.csv")
}

#[test]
fn synth_is_deterministic_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "synth", "--classes", "3", "--dim", "5", "--per-class", "4", "--seed", "11", "--out",
        "a.csv",
    ];
    run_ok(&args, dir.path());
    let first = std::fs::read(dir.path().join("a.csv")).unwrap();
    let args2 = [
        "synth", "--classes", "3", "--dim", "5", "--per-class", "4", "--seed", "11", "--out",
        "b.csv",
    ];
    run_ok(&args2, dir.path());
    let second = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(first, second, "same seed must give identical CSV bytes");

    // Invalid spec: one class.
    let code = exit_code(
        &[
            "synth", "--classes", "1", "--dim", "5", "--per-class", "4", "--seed", "1", "--out",
            "c.csv",
        ],
        dir.path(),
    );
    assert_eq!(code, 2);
}

#[test]
fn synth_output_feeds_eval() {
    let dir = tempfile::tempdir().unwrap();
    synth_bench(dir.path());
    let out = run_ok(
        &[
            "eval",
            "--model",
            "mpd",
            "--data",
            "bench.csv",
            "--train-per-class",
            "6",
            "--splits",
            "2",
            "--seed",
            "3",
            "--out",
            "mpd.json",
        ],
        dir.path(),
    );
    drop(out);
    let report = file_json_without_timing(&dir.path().join("mpd.json"));
    assert_eq!(report["command"], "eval");
    assert_eq!(report["results"]["splits"].as_array().unwrap().len(), 2);
}

#[test]
fn eval_mean_is_arithmetic_mean_of_splits() {
    let dir = tempfile::tempdir().unwrap();
    synth_bench(dir.path());
    run_ok(
        &[
            "eval",
            "--model",
            "crc-l2",
            "--data",
            "bench.csv",
            "--train-per-class",
            "6",
            "--splits",
            "10",
            "--seed",
            "1",
            "--lambda",
            "60",
            "--rank-k",
            "2",
            "--out",
            "l2.json",
        ],
        dir.path(),
    );
    let report = file_json_without_timing(&dir.path().join("l2.json"));
    let splits = report["results"]["splits"].as_array().unwrap();
    assert_eq!(splits.len(), 10);
    let mean: f64 = splits
        .iter()
        .map(|s| s["accuracy"].as_f64().unwrap())
        .sum::<f64>()
        / splits.len() as f64;
    let reported = report["results"]["mean_accuracy"].as_f64().unwrap();
    assert!((mean - reported).abs() < 1e-12);
    // Rank-k accuracy is at least top-1 accuracy on every split.
    for s in splits {
        assert!(s["rank_k_accuracy"].as_f64().unwrap() >= s["accuracy"].as_f64().unwrap());
    }
}

#[test]
fn eval_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    synth_bench(dir.path());
    // Unknown model name is rejected by clap.
    assert_eq!(
        exit_code(
            &[
                "eval",
                "--model",
                "nearest-centroid",
                "--data",
                "bench.csv",
                "--train-per-class",
                "6"
            ],
            dir.path(),
        ),
        2
    );
    // Block sizes without dl-nscr.
    assert_eq!(
        exit_code(
            &[
                "eval",
                "--model",
                "mpd",
                "--data",
                "bench.csv",
                "--train-per-class",
                "6",
                "--block-size",
                "2"
            ],
            dir.path(),
        ),
        2
    );
    // dl-nscr without block sizes.
    assert_eq!(
        exit_code(
            &[
                "eval",
                "--model",
                "dl-nscr",
                "--data",
                "bench.csv",
                "--train-per-class",
                "6"
            ],
            dir.path(),
        ),
        2
    );
    // Out-of-range train-per-class.
    assert_eq!(
        exit_code(
            &[
                "eval",
                "--model",
                "mpd",
                "--data",
                "bench.csv",
                "--train-per-class",
                "12"
            ],
            dir.path(),
        ),
        2
    );
}

#[test]
fn crc_and_dl_runs_share_identical_partitions() {
    let dir = tempfile::tempdir().unwrap();
    synth_bench(dir.path());
    run_ok(
        &[
            "eval",
            "--model",
            "crc-l2",
            "--data",
            "bench.csv",
            "--train-per-class",
            "6",
            "--splits",
            "3",
            "--seed",
            "5",
            "--out",
            "l2.json",
        ],
        dir.path(),
    );
    run_ok(
        &[
            "eval",
            "--model",
            "dl-nscr",
            "--data",
            "bench.csv",
            "--train-per-class",
            "6",
            "--splits",
            "3",
            "--seed",
            "5",
            "--block-size",
            "2",
            "--out",
            "dl.json",
        ],
        dir.path(),
    );
    let l2 = file_json_without_timing(&dir.path().join("l2.json"));
    let dl = file_json_without_timing(&dir.path().join("dl.json"));
    for i in 0..3 {
        assert_eq!(
            l2["results"]["splits"][i]["digest"],
            dl["results"]["splits"][i]["digest"],
            "split {i} digests differ"
        );
    }
}

#[test]
fn select_from_table_reproduces_known_columns() {
    let dir = tempfile::tempdir().unwrap();
    let table = concat!(
        "name,dim,classes,samples_per_class,num_train,mpd_accuracy,",
        "crc_l1_accuracy,crc_l2_accuracy,starred\n",
        "Extended Yale B,504,38,32.0,1207,0.653,0.951,0.976,false\n",
        "iLIDS-AA46,400,100,46.0,4600,0.351,0.779,0.667,false\n",
    );
    std::fs::write(dir.path().join("raw.csv"), table).unwrap();
    run_ok(
        &[
            "select",
            "--from-table",
            "raw.csv",
            "--out",
            "sel.json",
            "--out-csv",
            "sel.csv",
        ],
        dir.path(),
    );
    let report = file_json_without_timing(&dir.path().join("sel.json"));
    let rows = report["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let yale = &rows[0];
    assert!((yale["fdr"].as_f64().unwrap() - 24.81).abs() < 0.02);
    assert!((yale["score"].as_f64().unwrap() - 10.36).abs() < 0.02);
    assert!((yale["err"].as_f64().unwrap() - 0.510).abs() < 0.02);
    assert_eq!(yale["recommendation"], "non-sparse");
    let aa46 = &rows[1];
    assert!((aa46["score"].as_f64().unwrap() - 3.05).abs() < 0.02);
    assert!((aa46["err"].as_f64().unwrap() + 0.510).abs() < 0.02);
    assert_eq!(aa46["recommendation"], "sparse");

    let csv = std::fs::read_to_string(dir.path().join("sel.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(1).unwrap().starts_with("Extended Yale B,504,38,"));
}

#[test]
fn shipped_benchmark_table_matches_embedded_rows() {
    let shipped = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/benchmark_stats.csv");
    let rows = colrep_cli::commands::select::parse_table(&shipped).unwrap();
    let embedded = &colrep::benchmarks::REFERENCE_ROWS;
    assert_eq!(rows.len(), embedded.len());
    for (shipped_row, reference) in rows.iter().zip(embedded.iter()) {
        assert_eq!(shipped_row.name, reference.name);
        assert_eq!(shipped_row.dim, reference.dim);
        assert_eq!(shipped_row.classes, reference.classes);
        assert_eq!(shipped_row.num_train, reference.num_train);
        assert_eq!(shipped_row.mpd_accuracy, reference.mpd_accuracy);
        assert_eq!(shipped_row.crc_l1_accuracy, reference.crc_l1_accuracy);
        assert_eq!(shipped_row.crc_l2_accuracy, reference.crc_l2_accuracy);
        assert_eq!(shipped_row.starred, reference.starred);
    }
}

#[test]
fn select_modes_are_mutually_exclusive() {
    let dir = tempfile::tempdir().unwrap();
    synth_bench(dir.path());
    assert_eq!(
        exit_code(
            &[
                "select",
                "--data",
                "bench.csv",
                "--from-table",
                "bench.csv",
                "--train-per-class",
                "6"
            ],
            dir.path(),
        ),
        2
    );
    assert_eq!(exit_code(&["select"], dir.path()), 2);
}

#[test]
fn select_on_dataset_reports_invariants() {
    let dir = tempfile::tempdir().unwrap();
    synth_bench(dir.path());
    run_ok(
        &[
            "select",
            "--data",
            "bench.csv",
            "--train-per-class",
            "6",
            "--seed",
            "2",
            "--out",
            "sel.json",
        ],
        dir.path(),
    );
    let report = file_json_without_timing(&dir.path().join("sel.json"));
    let r = &report["results"];
    let fdr = r["fdr"].as_f64().unwrap();
    let mpd = r["mpd_accuracy"].as_f64().unwrap();
    let classes = r["num_classes"].as_f64().unwrap();
    assert!((fdr - mpd * classes).abs() < 1e-12);
    let score = r["score"].as_f64().unwrap();
    let dim = r["dim"].as_f64().unwrap();
    let n = r["num_train"].as_f64().unwrap();
    assert!((score - fdr * dim / n).abs() < 1e-12);
}

#[test]
fn compare_row_set_matches_requested_models() {
    let dir = tempfile::tempdir().unwrap();
    synth_bench(dir.path());
    run_ok(
        &[
            "compare",
            "--data",
            "bench.csv",
            "--models",
            "mpd,crc-l2",
            "--train-per-class",
            "6",
            "--splits",
            "2",
            "--seed",
            "4",
            "--out-json",
            "cmp.json",
            "--out-csv",
            "cmp.csv",
        ],
        dir.path(),
    );
    let report = file_json_without_timing(&dir.path().join("cmp.json"));
    let models: Vec<&str> = report["results"]["models"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["model"].as_str().unwrap())
        .collect();
    assert_eq!(models, vec!["mpd", "crc-l2"]);
    let csv = std::fs::read_to_string(dir.path().join("cmp.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "model,mean_accuracy,fit_ms,test_ms_per_sample"
    );
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn fit_dict_round_trips_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    synth_bench(dir.path());
    run_ok(
        &[
            "fit-dict",
            "--data",
            "bench.csv",
            "--block-size",
            "2",
            "--lambda",
            "0.0001",
            "--seed",
            "6",
            "--out",
            "dict.json",
            "--trace",
            "trace.json",
        ],
        dir.path(),
    );

    // Byte-comparison oracle: load then save again, bytes must match.
    let dict_path = dir.path().join("dict.json");
    let original = std::fs::read(&dict_path).unwrap();
    let (dict, lambda1, fit) = load_dictionary(&dict_path).unwrap();
    let resaved_path = dir.path().join("dict2.json");
    colrep_cli::dict_io::save_dictionary(&resaved_path, &dict, lambda1, fit).unwrap();
    let resaved = std::fs::read(&resaved_path).unwrap();
    assert_eq!(original, resaved, "dictionary container must round-trip bit-exact");

    // Trace is monotone.
    let trace = file_json_without_timing(&dir.path().join("trace.json"));
    let objectives: Vec<f64> = trace["results"]["objectives"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!(!objectives.is_empty());
    for w in objectives.windows(2) {
        assert!(w[1] <= w[0] + 1e-10 * w[0].abs());
    }

    // Missing block sizes is a usage error.
    assert_eq!(
        exit_code(
            &["fit-dict", "--data", "bench.csv", "--out", "d.json"],
            dir.path(),
        ),
        2
    );
}

#[test]
fn set_eval_is_gated_and_runs() {
    let dir = tempfile::tempdir().unwrap();
    synth_bench(dir.path());
    run_ok(
        &[
            "eval",
            "--model",
            "dl-nscr",
            "--data",
            "bench.csv",
            "--train-per-class",
            "6",
            "--seed",
            "2",
            "--block-size",
            "2",
            "--set-eval",
            "--set-rule",
            "normalized-residual",
            "--out",
            "set.json",
        ],
        dir.path(),
    );
    let report = file_json_without_timing(&dir.path().join("set.json"));
    assert_eq!(report["config"]["set_eval"], true);
    // One prediction per class in set mode.
    assert!(report["results"]["mean_accuracy"].as_f64().unwrap() >= 0.0);

    assert_eq!(
        exit_code(
            &[
                "eval",
                "--model",
                "crc-l2",
                "--data",
                "bench.csv",
                "--train-per-class",
                "6",
                "--set-eval"
            ],
            dir.path(),
        ),
        2
    );
}

#[test]
fn data_failures_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "label,x\na,1.0\nb,NaN\n").unwrap();
    assert_eq!(
        exit_code(
            &[
                "eval",
                "--model",
                "mpd",
                "--data",
                "bad.csv",
                "--train-per-class",
                "1"
            ],
            dir.path(),
        ),
        1
    );
}

#[test]
fn config_file_supplies_values_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    synth_bench(dir.path());
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{
            "data": "bench.csv",
            "model": "crc-l2",
            "train-per-class": 6,
            "splits": 2,
            "seed": 3,
            "lambda": 60.0
        }"#,
    )
    .unwrap();
    run_ok(
        &["eval", "--config", "cfg.json", "--out", "a.json"],
        dir.path(),
    );
    let a = file_json_without_timing(&dir.path().join("a.json"));
    assert_eq!(a["config"]["splits"], 2);
    assert_eq!(a["config"]["lambda"], 60.0);

    // Flag overrides the file value.
    run_ok(
        &[
            "eval",
            "--config",
            "cfg.json",
            "--splits",
            "1",
            "--out",
            "b.json",
        ],
        dir.path(),
    );
    let b = file_json_without_timing(&dir.path().join("b.json"));
    assert_eq!(b["config"]["splits"], 1);
}

#[test]
fn reports_are_deterministic_modulo_timing() {
    let dir = tempfile::tempdir().unwrap();
    synth_bench(dir.path());

    // eval
    for name in ["r1.json", "r2.json"] {
        run_ok(
            &[
                "eval",
                "--model",
                "dl-nscr",
                "--data",
                "bench.csv",
                "--train-per-class",
                "6",
                "--splits",
                "2",
                "--seed",
                "8",
                "--block-size",
                "2",
                "--out",
                name,
            ],
            dir.path(),
        );
    }
    assert_eq!(
        serde_json::to_string(&file_json_without_timing(&dir.path().join("r1.json"))).unwrap(),
        serde_json::to_string(&file_json_without_timing(&dir.path().join("r2.json"))).unwrap()
    );

    // select --from-table
    std::fs::copy(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/benchmark_stats.csv"),
        dir.path().join("raw.csv"),
    )
    .unwrap();
    for name in ["s1.json", "s2.json"] {
        run_ok(
            &["select", "--from-table", "raw.csv", "--out", name],
            dir.path(),
        );
    }
    assert_eq!(
        serde_json::to_string(&file_json_without_timing(&dir.path().join("s1.json"))).unwrap(),
        serde_json::to_string(&file_json_without_timing(&dir.path().join("s2.json"))).unwrap()
    );
}
