//! End-to-end checks of the binary: output formats, caching, exit codes.

use std::fs;
use std::process::{Command, Output};

fn fschar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fschar"))
        .args(args)
        .output()
        .expect("fschar runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = fschar(args);
    assert!(out.status.success(), "fschar {args:?}: {out:?}");
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn json_payload_is_canonical() {
    let got = stdout_of(&["configs", "--weight", "1,0,0", "--cutoff", "2"]);
    let expected = concat!(
        r#"{"cutoff":2,"terms":[{"n1":0,"n2":0,"d":0,"c":"1"},"#,
        r#"{"n1":0,"n2":1,"d":1,"c":"1"},{"n1":1,"n2":0,"d":1,"c":"1"},"#,
        r#"{"n1":0,"n2":1,"d":2,"c":"1"},{"n1":1,"n2":0,"d":2,"c":"1"}]}"#,
        "\n"
    );
    assert_eq!(got, expected);
}

#[test]
fn csv_payload_matches_json_ordering() {
    let got = stdout_of(&[
        "qp", "--weight", "1,0,0", "--cutoff", "2", "--format", "csv",
    ]);
    let expected = "n1,n2,d,coeff\n0,0,0,1\n0,1,1,1\n1,0,1,1\n0,1,2,1\n1,0,2,1\n";
    assert_eq!(got, expected);
}

#[test]
fn methods_emit_identical_payloads() {
    let configs = stdout_of(&["configs", "--weight", "0,1,1", "--cutoff", "8"]);
    let qp = stdout_of(&["qp", "--weight", "0,1,1", "--cutoff", "8"]);
    for form in ["m", "n", "georgiev"] {
        let fermionic = stdout_of(&[
            "fermionic",
            "--form",
            form,
            "--weight",
            "0,1,1",
            "--cutoff",
            "8",
        ]);
        assert_eq!(fermionic, configs, "form {form}");
    }
    assert_eq!(qp, configs);
}

#[test]
fn list_mode_emits_configuration_json() {
    let got = stdout_of(&[
        "configs", "--weight", "1,0,0,0", "--ell", "3", "--cutoff", "1", "--list",
    ]);
    let expected =
        "{\"entries\":[]}\n{\"entries\":[0,0,1]}\n{\"entries\":[0,1]}\n{\"entries\":[1]}\n";
    assert_eq!(got, expected);

    // Characters are two-color; other ell values need --list.
    let out = fschar(&[
        "configs", "--weight", "1,0,0,0", "--ell", "3", "--cutoff", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn matrices_payload_is_stable() {
    let got = stdout_of(&["matrices", "--weight", "1,1,0"]);
    let expected = concat!(
        r#"{"k":2,"Q":[[1,1,0,1],[1,2,1,2],[0,0,1,1],[0,0,1,2]],"#,
        r#""L":[0,1,0,0],"R":[[1,-1,0,0],[0,1,0,0],[0,0,-1,1],[0,0,1,0]]}"#,
        "\n"
    );
    assert_eq!(got, expected);

    let out = fschar(&["matrices", "--weight", "1,0,1"]);
    assert_eq!(out.status.code(), Some(2), "mixed weight has no L vector");
}

#[test]
fn verify_report_is_deterministic() {
    let first = stdout_of(&["verify", "--weight", "0,2,0", "--cutoff", "10"]);
    let second = stdout_of(&[
        "verify", "--weight", "0,2,0", "--cutoff", "10", "--jobs", "3",
    ]);
    assert_eq!(first, second);
    assert!(first.contains("\"agree\":true"));
}

#[test]
fn cache_round_trip_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let dir_arg = dir.path().to_str().unwrap();
    let args = [
        "fermionic",
        "--form",
        "m",
        "--weight",
        "2,0,0",
        "--cutoff",
        "9",
        "--cache-dir",
        dir_arg,
    ];

    let cold = fschar(&args);
    assert!(cold.status.success());
    let files: Vec<_> = fs::read_dir(dir.path()).unwrap().flatten().collect();
    assert_eq!(files.len(), 1);

    let warm = fschar(&args);
    assert!(warm.status.success());
    assert_eq!(warm.stdout, cold.stdout);
    assert!(
        String::from_utf8_lossy(&warm.stderr).contains("cache hit"),
        "second run should load from the cache"
    );

    // A smaller request is served by truncating the stored series.
    let truncated = fschar(&[
        "fermionic",
        "--form",
        "m",
        "--weight",
        "2,0,0",
        "--cutoff",
        "4",
        "--cache-dir",
        dir_arg,
    ]);
    assert!(truncated.status.success());
    let text = String::from_utf8(truncated.stdout).unwrap();
    assert!(text.starts_with(r#"{"cutoff":4,"#));

    // Tampering is fatal, not silently recomputed.
    let path = files[0].path();
    let tampered = fs::read_to_string(&path)
        .unwrap()
        .replacen("\"c\":\"1\"", "\"c\":\"3\"", 1);
    fs::write(&path, tampered).unwrap();
    let corrupt = fschar(&args);
    assert_eq!(corrupt.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&corrupt.stderr).contains("corrupt"));
}

#[test]
fn cache_env_var_is_honored_but_flag_wins() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();

    let out = Command::new(env!("CARGO_BIN_EXE_fschar"))
        .args(["qp", "--weight", "1,0,0", "--cutoff", "5"])
        .env("FSCHAR_CACHE_DIR", env_dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(fs::read_dir(env_dir.path()).unwrap().count(), 1);

    let out = Command::new(env!("CARGO_BIN_EXE_fschar"))
        .args([
            "qp",
            "--weight",
            "1,0,0",
            "--cutoff",
            "6",
            "--cache-dir",
            flag_dir.path().to_str().unwrap(),
        ])
        .env("FSCHAR_CACHE_DIR", env_dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(fs::read_dir(flag_dir.path()).unwrap().count(), 1);
    assert_eq!(
        fs::read_dir(env_dir.path()).unwrap().count(),
        1,
        "the flag run must not touch the env-var directory"
    );
}

#[test]
fn det_check_reports_range_and_exit() {
    let out = fschar(&["det-check", "--p-min", "-4", "--p-max", "4", "--r-max", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"all_one\":true"));
}
