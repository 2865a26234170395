//! End-to-end behaviour of the `yslice` binary: exit codes, determinism and
//! report round-trips.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_yslice"))
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("yslice-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn default_a1_suite_passes() {
    let o = run(&["verify", "all", "--config", config("a1.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.starts_with("# yslice report: seed 20261019"));
    assert!(out.lines().skip(1).all(|l| l.starts_with("[pass]") || l.starts_with("[oracle-relative-pass]")));
}

#[test]
fn mutation_fixture_fails_with_witness() {
    let o = run(&["verify", "all", "--config", config("mutation.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let fail = out.lines().find(|l| l.starts_with("[fail]")).expect("a failing record");
    assert!(fail.contains("witness:"), "{fail}");
}

#[test]
fn invalid_case_is_a_config_error() {
    let p = scratch("bad-case.toml", "cartan = \"A1\"\nseed = 1\n[[cases]]\nlambda = [0]\nmu = [2]\n");
    let o = run(&["verify", "all", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cases[0]"), "{}", stderr(&o));
}

#[test]
fn unknown_keys_and_bad_literals_are_config_errors() {
    let p = scratch("bad-key.toml", "cartan = \"A1\"\nseed = 1\n[caps]\nbogus = 3\n");
    let o = run(&["verify", "all", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));

    let p = scratch("bad-rat.toml", "cartan = \"A1\"\nseed = 1\n[[cases]]\nlambda = [1]\nmu = [-1]\nr = [[\"1/0\"]]\n");
    let o = run(&["verify", "all", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cases[0].r[0][0]"), "{}", stderr(&o));

    let p = scratch("no-seed.toml", "cartan = \"A1\"\n");
    let o = run(&["verify", "all", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("seed"), "{}", stderr(&o));
}

#[test]
fn unknown_group_and_missing_file_are_usage_errors() {
    let o = run(&["verify", "nonsense", "--config", config("a1.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "all", "--config", "/nonexistent/config.toml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn structured_reports_are_byte_stable_and_round_trip() {
    let cfg = config("a1.toml");
    let cfg = cfg.to_str().unwrap();
    let a = run(&["verify", "classical", "--config", cfg, "--format", "structured", "--jobs", "1"]);
    let b = run(&["verify", "classical", "--config", cfg, "--format", "structured", "--jobs", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let p = scratch("report.json", &stdout(&a));
    let again = run(&["report", "--input", p.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(again.stdout, a.stdout);

    let text = run(&["report", "--input", p.to_str().unwrap(), "--format", "text"]);
    assert!(stdout(&text).starts_with("# yslice report: seed 20261019"));
}

#[test]
fn seed_override_changes_the_header_only_through_the_seed() {
    let cfg = config("a1.toml");
    let o = run(&["verify", "qhr", "--config", cfg.to_str().unwrap(), "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("# yslice report: seed 5,"));
}

#[test]
fn list_checks_names_every_group() {
    let o = run(&["list-checks"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for g in ["relations", "truncation", "coproduct", "reduction", "classical", "qhr"] {
        assert!(out.lines().any(|l| l.starts_with(g)), "{g} missing");
    }
}
