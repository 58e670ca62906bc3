//! The `sullivan` binary: exit codes and output shape.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const CP2: &str = "generator x 2\ngenerator y 5\nd y = x^3\n";
const S2: &str = "generator x 2\ngenerator y 3\nd y = x^2\n";
const E1: &str = "generator x 2\ngenerator y 2\ngenerator z 3\ngenerator w 3\ngenerator t 3\n\
                  d z = x^2\nd w = x*y\nd t = y^2\n";
const D_SQUARED: &str = "generator x 2\ngenerator y 3\ngenerator z 4\nd y = x^2\nd z = x*y\n";

fn run(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sullivan"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn model(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn record(o: &Output) -> Value {
    let line = stdout(o);
    assert_eq!(line.trim_end().lines().count(), 1, "{line}");
    serde_json::from_str(line.trim_end()).unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let cp2 = model(&dir, "cp2.txt", CP2);
    let bad = model(&dir, "bad.txt", D_SQUARED);
    assert_eq!(
        code(&run(&["validate", cp2.to_str().unwrap()], dir.path())),
        0
    );
    let o = run(&["validate", bad.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("d-squared: generator z (witness x^3)"));
    assert_eq!(code(&run(&["validate", "missing.txt"], dir.path())), 64);
    let syntax = model(
        &dir,
        "syn.txt",
        "generator x 2\ngenerator y 3\nd y = x^ + 1\n",
    );
    let o = run(&["validate", syntax.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 64);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3, column 10"));
}

#[test]
fn check_reports() {
    let dir = TempDir::new().unwrap();
    let e1 = model(&dir, "e1.txt", E1);
    let o = run(
        &["check", e1.to_str().unwrap(), "--format", "record"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let r = record(&o);
    assert_eq!(r["version"], 1);
    assert_eq!(r["kind"], "check");
    assert_eq!(r["e"], 3);
    assert_eq!(r["lupton_status"], "HOLDS_VIA_DIMS");
    assert_eq!(r["hilali"]["holds"], true);
    assert_eq!(r["kernel"]["parity"], "EVEN_ONLY");

    let cp2 = model(&dir, "cp2.txt", CP2);
    let o = run(&["check", cp2.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("HOLDS_VIA_TRUNCATED_POLY"));
    assert!(text.contains("witness          [x] in degree 2, power 2"));

    let poly = model(&dir, "poly.txt", "generator x 2\n");
    let o = run(
        &["check", poly.to_str().unwrap(), "--format", "record"],
        dir.path(),
    );
    assert_eq!(code(&o), 1);
    assert_eq!(record(&o)["status"], "NOT_CERTIFIED");

    let bad = model(&dir, "bad.txt", D_SQUARED);
    assert_eq!(code(&run(&["check", bad.to_str().unwrap()], dir.path())), 1);
}

#[test]
fn gysin_exit_codes() {
    let dir = TempDir::new().unwrap();
    for (name, text) in [("s2", S2), ("e1", E1)] {
        let f = model(&dir, name, text);
        let o = run(&["gysin", f.to_str().unwrap()], dir.path());
        assert_eq!(code(&o), 0, "{name}: {}", stdout(&o));
        assert!(stdout(&o).ends_with("exact\n"));
    }
    let odd = model(&dir, "s3s3", "generator x 3\ngenerator y 3\n");
    assert_eq!(code(&run(&["gysin", odd.to_str().unwrap()], dir.path())), 3);

    let e1 = model(&dir, "e1", E1);
    let o = run(
        &[
            "gysin",
            e1.to_str().unwrap(),
            "--degree",
            "5",
            "--length",
            "2",
            "--format",
            "record",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let r = record(&o);
    assert_eq!(r["exact"], true);
    assert_eq!(r["dims"]["v_middle"], 2);
    // a window needs both coordinates
    assert_eq!(
        code(&run(
            &["gysin", e1.to_str().unwrap(), "--degree", "5"],
            dir.path()
        )),
        64
    );
}

#[test]
fn cohomology_and_toomer() {
    let dir = TempDir::new().unwrap();
    let cp2 = model(&dir, "cp2", CP2);
    let o = run(
        &[
            "cohomology",
            cp2.to_str().unwrap(),
            "--max-degree",
            "4",
            "--format",
            "record",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert_eq!(record(&o)["dims"], serde_json::json!([1, 0, 1, 0, 1]));
    let o = run(
        &["cohomology", cp2.to_str().unwrap(), "--bigraded"],
        dir.path(),
    );
    assert!(stdout(&o).contains("4   2   1   x^2"));

    let o = run(
        &["toomer", cp2.to_str().unwrap(), "--format", "record"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let r = record(&o);
    assert_eq!(r["e_formula"], 2);
    assert_eq!(r["e_direct"], 2);
    assert_eq!(r["agrees"], true);
}

#[test]
fn catalog_commands() {
    let dir = TempDir::new().unwrap();
    let o = run(&["catalog", "list"], dir.path());
    assert_eq!(code(&o), 0);
    for id in [
        "sphere-S2",
        "sphere-S3",
        "product-S3xS3",
        "product-S2xS2",
        "cp2",
        "cp3",
        "E1",
        "odd-kernel",
    ] {
        assert!(stdout(&o).lines().any(|l| l.starts_with(id)), "{id}");
    }
    assert_eq!(code(&run(&["catalog", "run-all"], dir.path())), 0);

    let o = run(
        &["catalog", "run", "sphere-S3", "--format", "record"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let r = record(&o);
    assert_eq!(r["e"], 1);
    assert_eq!(r["dims"], serde_json::json!([1, 0, 0, 1]));
    assert_eq!(r["expectations_met"], true);

    let o = run(&["catalog", "run", "cp2", "--format", "record"], dir.path());
    assert_eq!(record(&o)["lupton_status"], "HOLDS_VIA_TRUNCATED_POLY");
    assert_eq!(
        code(&run(&["catalog", "run", "no-such-model"], dir.path())),
        64
    );
}

#[test]
fn sweep_commands() {
    let dir = TempDir::new().unwrap();
    let o = run(
        &[
            "sweep",
            "--max-even",
            "2",
            "--max-odd",
            "0",
            "--max-degree",
            "6",
            "--format",
            "record",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let r = record(&o);
    assert_eq!(r["certified"], 0);
    assert!(r["distinct"].as_u64().unwrap() > 0);

    let o = run(
        &[
            "sweep",
            "--max-even",
            "0",
            "--max-odd",
            "0",
            "--max-degree",
            "6",
            "--format",
            "record",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert_eq!(record(&o)["distinct"], 0);

    let o = run(
        &[
            "sweep",
            "--max-even",
            "1",
            "--max-odd",
            "2",
            "--max-degree",
            "5",
            "--coformal",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("findings        0"));

    assert_eq!(
        code(&run(
            &[
                "sweep",
                "--max-even",
                "7",
                "--max-odd",
                "1",
                "--max-degree",
                "6"
            ],
            dir.path()
        )),
        64
    );
    assert_eq!(code(&run(&["sweep", "--max-even", "1"], dir.path())), 64);
}

#[test]
fn usage_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&run(&[], dir.path())), 64);
    assert_eq!(code(&run(&["frobnicate"], dir.path())), 64);
    assert_eq!(code(&run(&["--help"], dir.path())), 0);
}
