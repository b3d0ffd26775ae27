//! End-to-end checks of the experiment runner: artifact layout, exit codes,
//! config-file handling, and byte-identical reproduction.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use leachsim::cli::main_entry;
use leachsim::report::{AGGREGATE_HEADER, TRACE_HEADER};

fn tmp_dir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn args(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn run_cli(list: &[&str]) -> i32 {
    main_entry(&args(list))
}

#[test]
fn run_writes_traces_and_aggregate() {
    let out = tmp_dir("run_artifacts");
    let out_s = out.to_str().unwrap();
    let code = run_cli(&[
        "run",
        "--variant",
        "modleach",
        "--seeds",
        "1..3",
        "--max-rounds",
        "300",
        "--out",
        out_s,
    ]);
    assert_eq!(code, 0);
    for seed in 1..=3 {
        let trace = fs::read_to_string(out.join(format!("trace_modleach_seed{seed}.csv"))).unwrap();
        assert!(trace.starts_with(TRACE_HEADER));
        assert_eq!(trace.lines().count(), 301, "300 rounds plus header");
    }
    let agg = fs::read_to_string(out.join("aggregate_modleach.csv")).unwrap();
    assert!(agg.starts_with(AGGREGATE_HEADER));
    let manifest = fs::read_to_string(out.join("config_used.json")).unwrap();
    assert!(manifest.contains("\"modleach\""));
    assert!(manifest.contains("\"seeds\""));
}

#[test]
fn rerun_reproduces_artifacts_byte_for_byte() {
    let a = tmp_dir("repro_a");
    let b = tmp_dir("repro_b");
    for out in [&a, &b] {
        let code = run_cli(&[
            "run",
            "--variant",
            "leach",
            "--seeds",
            "2..4",
            "--max-rounds",
            "250",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    for name in [
        "trace_leach_seed2.csv",
        "trace_leach_seed3.csv",
        "trace_leach_seed4.csv",
        "aggregate_leach.csv",
        "config_used.json",
    ] {
        let left = fs::read(a.join(name)).unwrap();
        let right = fs::read(b.join(name)).unwrap();
        assert_eq!(left, right, "{name} differs between identical runs");
    }
}

#[test]
fn compare_writes_four_aggregates_table_and_charts() {
    let out = tmp_dir("compare_artifacts");
    let code = run_cli(&[
        "compare",
        "--seeds",
        "1..2",
        "--nodes",
        "30",
        "--max-rounds",
        "400",
        "--svg",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    for variant in ["leach", "modleach", "modleach_ht", "modleach_st"] {
        assert!(out.join(format!("aggregate_{variant}.csv")).exists());
    }
    let table = fs::read_to_string(out.join("comparison.csv")).unwrap();
    assert!(table.starts_with("variant,first_dead_mean"));
    assert_eq!(table.lines().count(), 5);
    for chart in ["alive_nodes.svg", "packets_to_bs.svg"] {
        let svg = fs::read_to_string(out.join(chart)).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("modleach_st"));
    }
}

#[test]
fn invalid_parameters_exit_2_and_name_the_field() {
    let code = run_cli(&["run", "--variant", "leach", "--nodes", "0", "--out", "unused"]);
    assert_eq!(code, 2);
}

#[test]
fn single_seed_with_ci_exits_2() {
    let code = run_cli(&["run", "--seeds", "7..7", "--ci", "--out", "unused"]);
    assert_eq!(code, 2);
}

#[test]
fn unknown_flag_exits_2() {
    assert_eq!(run_cli(&["run", "--frobnicate"]), 2);
    assert_eq!(run_cli(&["simulate"]), 2);
}

#[test]
fn config_file_round_trip_and_unknown_key_rejection() {
    let out = tmp_dir("config_file");
    let config_path = out.join("config.json");
    fs::write(
        &config_path,
        r#"{
            "field": { "node_count": 25, "max_rounds": 200, "seed": 9 },
            "protocol": { "variant": "modleach_st", "p_ch": 0.2 }
        }"#,
    )
    .unwrap();
    let code = run_cli(&[
        "run",
        "--config",
        config_path.to_str().unwrap(),
        "--seeds",
        "5..6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.join("trace_modleach_st_seed5.csv").exists());

    let bad_path = out.join("bad.json");
    fs::write(&bad_path, r#"{ "field": { "node_cuont": 25 } }"#).unwrap();
    let code = run_cli(&["run", "--config", bad_path.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn missing_config_file_exits_1() {
    let code = run_cli(&["run", "--config", "/nonexistent/nowhere.json"]);
    assert_eq!(code, 1);
}

/// Drive the installed binary once to check the process-level contract.
#[test]
fn binary_reports_summary_on_stdout() {
    let out = tmp_dir("binary_smoke");
    let result = Command::new(env!("CARGO_BIN_EXE_leachsim"))
        .args([
            "run",
            "--variant",
            "leach",
            "--seeds",
            "1..2",
            "--nodes",
            "20",
            "--max-rounds",
            "150",
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    assert!(result.status.success());
    let stdout = String::from_utf8(result.stdout).unwrap();
    assert!(stdout.contains("variant leach"));
    assert!(stdout.contains("first death"));
    assert!(stdout.contains("packets to bs"));

    let result = Command::new(env!("CARGO_BIN_EXE_leachsim"))
        .args(["run", "--nodes", "0"])
        .output()
        .expect("binary runs");
    assert_eq!(result.status.code(), Some(2));
    let stderr = String::from_utf8(result.stderr).unwrap();
    assert!(stderr.contains("node_count"));
}
