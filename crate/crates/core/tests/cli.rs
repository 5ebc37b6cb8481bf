//! End-to-end tests of the `bgc` binary: exit codes, flag validation, output
//! formats, and byte-level determinism of reruns.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bgc")).args(args).output().expect("binary should spawn")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bgc"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary should spawn")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process should exit normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be utf-8")
}

#[test]
fn capacity_text_output_and_exit_zero() {
    let out = run(&["capacity", "--channel", "thermal", "--eta", "0.5", "--N", "1", "--energy", "10"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("2.64854051433022"), "unexpected capacity output:\n{text}");
}

#[test]
fn capacity_json_is_byte_identical_across_reruns() {
    let args = ["capacity", "--channel", "amp", "--kappa", "2", "--N", "1", "--energy", "5", "--format", "json"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let value: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(value["family"], "amp");
}

#[test]
fn missing_family_flag_is_invalid_parameter() {
    let out = run(&["capacity", "--channel", "thermal", "--energy", "1"]);
    assert_eq!(code(&out), 1);

    // The environment flag is optional: omitted means a vacuum environment.
    let out = run(&["capacity", "--channel", "thermal", "--eta", "0.5", "--energy", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("N=0"));
}

#[test]
fn foreign_family_flag_is_refused() {
    let out = run(&[
        "capacity", "--channel", "addnoise", "--n", "1", "--kappa", "2", "--energy", "1",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn decompose_reports_the_minimal_split() {
    let out = run(&["decompose", "--channel", "amp", "--kappa", "2", "--N", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("0.6666666666666666"), "eta0 missing:\n{text}");
    assert!(text.contains("3"), "kappa0 missing:\n{text}");
}

#[test]
fn help_screens_list_every_command_and_flag() {
    let top = run(&["--help"]);
    assert_eq!(code(&top), 0);
    let text = stdout(&top);
    for command in ["capacity", "decompose", "plot", "verify"] {
        assert!(text.contains(command), "--help missing {command}:\n{text}");
    }

    let cap = run(&["capacity", "--help"]);
    assert_eq!(code(&cap), 0);
    let text = stdout(&cap);
    for flag in ["--channel", "--eta", "--N", "--n", "--kappa", "--energy", "--format", "--threads"] {
        assert!(text.contains(flag), "capacity --help missing {flag}:\n{text}");
    }

    let ver = run(&["verify", "--help"]);
    assert_eq!(code(&ver), 0);
    let text = stdout(&ver);
    for flag in ["--suite", "--seed", "--dim", "--samples", "--q-max", "--tolerance", "--budget", "--report"] {
        assert!(text.contains(flag), "verify --help missing {flag}:\n{text}");
    }
}

#[test]
fn version_flag_exits_zero() {
    let out = run(&["--version"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("bgc"));
}

#[test]
fn unknown_subcommand_exits_one() {
    assert_eq!(code(&run(&["entropy"])), 1);
}

#[test]
fn unknown_panel_exits_one() {
    assert_eq!(code(&run(&["plot", "--panel", "fig9"])), 1);
}

#[test]
fn plot_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2d.csv");
    let path_str = path.to_str().unwrap();

    let first = run(&["plot", "--panel", "fig2d", "--out", path_str]);
    assert_eq!(code(&first), 0);
    let bytes_first = std::fs::read(&path).unwrap();
    let second = run(&["plot", "--panel", "fig2d", "--out", path_str]);
    assert_eq!(code(&second), 0);
    let bytes_second = std::fs::read(&path).unwrap();
    assert_eq!(bytes_first, bytes_second);

    let text = String::from_utf8(bytes_first).unwrap();
    assert!(text.starts_with('#'));
    assert!(text.contains("panel,series,x,value\n"));
    assert!(!text.contains('\r'), "CSV must use LF line endings");

    // stdout output is the same byte stream as the file.
    let streamed = run(&["plot", "--panel", "fig2d"]);
    assert_eq!(code(&streamed), 0);
    assert_eq!(stdout(&streamed), text);
}

#[test]
fn plot_into_missing_directory_fails() {
    let out = run(&["plot", "--panel", "fig2a", "--out", "/nonexistent-dir/figure.csv"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn verify_json_reports_identical_modulo_elapsed() {
    let args = ["verify", "--suite", "eof", "--dim", "32", "--format", "json"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);

    let mut a: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    let mut b: serde_json::Value = serde_json::from_slice(&second.stdout).unwrap();
    for report in [&mut a, &mut b] {
        for entry in report.as_array_mut().expect("reports are a JSON array") {
            let cleared = entry
                .as_object_mut()
                .unwrap()
                .insert("elapsed_seconds".into(), serde_json::Value::Null);
            assert!(cleared.is_some(), "report lacks elapsed_seconds");
        }
    }
    assert_eq!(a, b);
    assert_eq!(a[0]["test"], "eof");
    assert_eq!(a[0]["passed"], true);
}

#[test]
fn verify_csv_omits_elapsed_and_is_byte_identical() {
    let args = ["verify", "--suite", "eof", "--dim", "32", "--format", "csv"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert!(text.starts_with("test,passed,worst_margin,tolerance,truncation_budget,seed,samples\n"));
    assert!(!text.contains("elapsed"));
}

#[test]
fn verify_failure_exits_two() {
    let out = run(&[
        "verify", "--suite", "conjecture", "--samples", "5", "--dim", "8", "--tolerance", "0",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn numerical_breakdown_exits_three() {
    // Near unit gain the reference outputs decay so fast that on a wide
    // enough space their truncated eigenvalues fall below the logarithm
    // floor, which is a numerical breakdown, not a failed check.
    let out = run(&[
        "verify", "--suite", "relent", "--kappa", "1.05", "--dim", "24", "--samples", "4",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn report_file_is_written_and_parses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "verify", "--suite", "eof", "--dim", "32", "--report", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let reports: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(reports[0]["test"], "eof");
    assert_eq!(reports.as_array().unwrap().len(), 1);
    // No leftover temp files from the atomic write.
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn suite_all_refuses_suite_specific_flags() {
    let out = run(&["verify", "--dim", "8"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn eof_refuses_sampling_flags() {
    let out = run(&["verify", "--suite", "eof", "--samples", "3"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn bad_thread_env_is_invalid() {
    let args = ["capacity", "--channel", "addnoise", "--n", "1", "--energy", "1"];
    assert_eq!(code(&run_env(&args, "BCL_THREADS", "abc")), 1);
    assert_eq!(code(&run_env(&args, "BCL_THREADS", "0")), 1);
}

#[test]
fn thread_env_overrides_flag_without_changing_results() {
    let args = ["verify", "--suite", "eof", "--dim", "32", "--format", "csv", "--threads", "1"];
    let plain = run(&args);
    let forced = run_env(&args, "BCL_THREADS", "2");
    assert_eq!(code(&plain), 0);
    assert_eq!(code(&forced), 0);
    assert_eq!(plain.stdout, forced.stdout);
}
