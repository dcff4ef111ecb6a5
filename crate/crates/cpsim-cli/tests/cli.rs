//! End-to-end tests of the `cpsim` binary: flag handling, exit codes,
//! config-file layering, replay, and plot emission.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cpsim"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawning cpsim")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn tmpdir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("cpsim-cli-{}-{tag}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["interface", "--help"]).status.code(), Some(0));
}

#[test]
fn unknown_flag_exits_one_and_lists_the_valid_set() {
    let out = run(&["interface", "--bogus", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("--bogus"), "should name the offending flag: {err}");
    for flag in ["--lambda", "--replicas", "--seed", "--grid", "--abort-contaminated"] {
        assert!(err.contains(flag), "valid set should list {flag}: {err}");
    }
}

#[test]
fn unknown_subcommand_exits_one() {
    assert_eq!(run(&["nosuchcmd"]).status.code(), Some(1));
}

#[test]
fn every_run_prints_resolved_config_and_hash() {
    let out = run(&["verify", "--suite", "oracle", "--cases", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("command: verify"));
    assert!(text.contains("config: {"));
    let hash_line = text.lines().find(|l| l.starts_with("config-hash: ")).expect("hash line");
    assert_eq!(hash_line.trim_start_matches("config-hash: ").len(), 64);
}

#[test]
fn percolate_all_open_field_escapes_to_level_fifty() {
    let out = run(&["percolate", "--p", "1.0", "--height", "50", "--gamma-beta", "0.5", "--i", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("Gamma(50) frequency: 200/200 = 1.0000"),
        "all-open field must always escape: {text}"
    );
}

#[test]
fn verify_coupling_suite_exits_zero() {
    let out = run(&["verify", "--suite", "coupling", "--cases", "30"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 violations"));
}

#[test]
fn verify_unknown_suite_exits_one() {
    let out = run(&["verify", "--suite", "nonsense", "--cases", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("valid suites"));
}

#[test]
fn config_file_layers_under_flags() {
    let dir = tmpdir("cfg");
    let cfg = dir.join("cfg.json");
    fs::write(&cfg, r#"{"lambda": 5.0, "T": 8.0, "replicas": 40}"#).unwrap();
    let out = run(&[
        "interface",
        "--config",
        cfg.to_str().unwrap(),
        "--replicas",
        "25",
        "--seed",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("\"replicas\":25"), "flag beats file: {text}");
    assert!(text.contains("\"lambda\":5.0"), "file beats default: {text}");
    assert!(text.contains("\"t_max\":8.0"), "file T applies: {text}");
}

#[test]
fn malformed_config_file_exits_one() {
    let dir = tmpdir("badcfg");
    let cfg = dir.join("cfg.json");
    fs::write(&cfg, r#"{"no_such_key": 1}"#).unwrap();
    let out = run(&["interface", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn contamination_abort_exits_two() {
    // Subcritical rate over a long horizon: the half-line trajectory dies,
    // which flags the replica, and the abort policy turns that into exit 2.
    let out = run(&[
        "interface",
        "--lambda",
        "2",
        "--T",
        "40",
        "--replicas",
        "20",
        "--seed",
        "7",
        "--abort-contaminated",
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
}

#[test]
fn simulate_replay_reproduces_the_edge_series() {
    let d1 = tmpdir("sim-dump");
    let d2 = tmpdir("sim-replay");
    let out = run(&[
        "simulate",
        "--lambda",
        "4",
        "--T",
        "10",
        "--seed",
        "42",
        "--dump-events",
        "--out",
        d1.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let events = d1.join("events.txt");
    assert!(events.exists());
    let out = run(&["simulate", "--load-events", events.to_str().unwrap(), "--out", d2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let a = fs::read(d1.join("edge.csv")).unwrap();
    let b = fs::read(d2.join("edge.csv")).unwrap();
    assert_eq!(a, b, "replayed edge series must match the original");
}

#[test]
fn interface_outputs_are_identical_across_thread_counts() {
    let d1 = tmpdir("thr1");
    let d4 = tmpdir("thr4");
    let common = ["interface", "--lambda", "4", "--T", "6", "--replicas", "30", "--seed", "5", "--out"];
    let mut args1: Vec<&str> = common.to_vec();
    args1.push(d1.to_str().unwrap());
    args1.extend(["--threads", "1"]);
    let mut args4: Vec<&str> = common.to_vec();
    args4.push(d4.to_str().unwrap());
    args4.extend(["--threads", "4"]);
    assert_eq!(run(&args1).status.code(), Some(0));
    assert_eq!(run(&args4).status.code(), Some(0));
    for name in ["config.json", "samples.csv", "summary.json"] {
        let a = fs::read(d1.join(name)).unwrap();
        let b = fs::read(d4.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between thread counts");
    }
}

#[test]
fn plot_emits_svg_and_dat_files() {
    let dir = tmpdir("plot");
    let out = run(&[
        "interface",
        "--lambda",
        "4",
        "--T",
        "6",
        "--replicas",
        "40",
        "--seed",
        "2",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["plot", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    for name in ["tails.svg", "tails.dat", "speed.svg", "speed.dat"] {
        assert!(dir.join(name).exists(), "{name} missing");
    }
    let svg = fs::read_to_string(dir.join("tails.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
    let dat = fs::read_to_string(dir.join("speed.dat")).unwrap();
    assert!(dat.starts_with("# alpha"));
}

#[test]
fn blocks_writes_field_csv_and_reports_rows() {
    let dir = tmpdir("blocks");
    let out = run(&[
        "blocks",
        "--lambda",
        "10",
        "--K",
        "2",
        "--N",
        "5",
        "--i",
        "2",
        "--seed",
        "3",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("row 0:"));
    assert!(text.contains("Gamma(2)"));
    let csv = fs::read_to_string(dir.join("blocks.csv")).unwrap();
    assert!(csv.lines().count() > 1);
    assert!(dir.join("field.csv").exists());
}
