//! Black-box tests of the `mixedsdde` binary: exit codes, output files, and
//! run-to-run determinism.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mixedsdde"))
}

fn write_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("study.toml");
    fs::write(
        &path,
        r#"
replicas = 6
seed = 11

[problem]
preset = "linear_mixed"
grid_steps = 256
"#,
    )
    .unwrap();
    path
}

#[test]
fn norms_study_runs_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let out = dir.path().join("out");
    let status = bin()
        .args(["norms", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    for file in ["records.csv", "summary.csv", "verdict.txt", "meta.txt"] {
        assert!(out.join(file).is_file(), "{file} missing");
    }
    let records = fs::read_to_string(out.join("records.csv")).unwrap();
    assert!(records.starts_with("replica,seed,"));
    let verdict = fs::read_to_string(out.join("verdict.txt")).unwrap();
    assert!(verdict.trim_end().ends_with("VERDICT: PASS"));
    let meta = fs::read_to_string(out.join("meta.txt")).unwrap();
    assert!(meta.contains("seed = 11"));
    assert!(meta.contains("study = norms"));
}

#[test]
fn seed_and_replica_overrides_are_respected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let out = dir.path().join("out");
    let status = bin()
        .args(["norms", "--config"])
        .arg(&cfg)
        .args(["--seed", "99", "--replicas", "3"])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let meta = fs::read_to_string(out.join("meta.txt")).unwrap();
    assert!(meta.contains("seed = 99"));
    assert!(meta.contains("replicas = 3"));
    let records = fs::read_to_string(out.join("records.csv")).unwrap();
    assert_eq!(records.lines().count(), 4); // header + 3 replicas
}

#[test]
fn identical_configs_give_byte_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let (out_a, out_b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&out_a, &out_b] {
        let status = bin()
            .args(["stability", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        // Pass or verdict failure are both fine here; this test pins
        // byte-determinism, not the verdict at toy scale.
        assert!(matches!(status.code(), Some(0) | Some(1)));
    }
    for file in ["records.csv", "summary.csv", "verdict.txt"] {
        let a = fs::read(out_a.join(file)).unwrap();
        let b = fs::read(out_b.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
    }
}

#[test]
fn bad_config_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "replicas = 0\n").unwrap();
    let status = bin()
        .args(["norms", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn missing_config_exits_with_code_2() {
    let status = bin()
        .args(["norms", "--config", "/nonexistent/nope.toml"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn unknown_closed_form_exits_with_code_2() {
    // The convergence study rejects presets without a registered closed form.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let status = bin()
        .args(["convergence", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}
