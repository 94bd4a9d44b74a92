use std::path::Path;
use std::process::{Command, Output};

use qdarwin_cli::{cmd_selftest, parse_config, SelftestOptions};
use qdarwin_core::experiments::builtin_figure;

fn qdarwin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdarwin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn files_under(dir: &Path) -> Vec<String> {
    let mut out: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    out.sort();
    out
}

#[test]
fn unknown_figure_exits_with_usage() {
    let dir = tempfile::tempdir().unwrap();
    let o = qdarwin(&["figure", "fig9", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown figure"));
    assert!(stderr(&o).contains("usage"));
}

#[test]
fn minimal_config_runs_and_writes_only_into_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("minimal.toml");
    std::fs::write(&cfg, "p = [0]\n").unwrap();
    let out = dir.path().join("results");
    let o = qdarwin(&["sweep", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(files_under(&out), vec!["sweep.csv", "sweep.svg"]);
    assert_eq!(files_under(dir.path()), vec!["minimal.toml", "results"]);
    let csv = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(stderr(&o).contains("1/1 points"));
}

#[test]
fn out_of_range_delta_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "p = [0]\n[redundancy]\ndelta = 1.5\n").unwrap();
    let o = qdarwin(&["sweep", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("redundancy.delta"), "{}", stderr(&o));
    assert!(stderr(&o).contains("delta out of range"));
    assert_eq!(files_under(dir.path()), vec!["bad.toml"]);
}

#[test]
fn syntax_error_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "p = [0]\nn = [8,\nomega = 1\n").unwrap();
    let o = qdarwin(&["sweep", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn missing_config_and_bad_flags_are_usage_errors() {
    assert_eq!(qdarwin(&["sweep", "/nonexistent/x.toml"]).status.code(), Some(2));
    assert_eq!(qdarwin(&["figure", "fig1", "--threshold-mode", "loose"]).status.code(), Some(2));
    assert_eq!(qdarwin(&["figure", "fig1", "--workers", "0", "--out", "/nonexistent/never"]).status.code(), Some(2));
    assert_eq!(qdarwin(&[]).status.code(), Some(2));
}

#[test]
fn explicit_config_reproduces_builtin_fig4_spec() {
    let text = r#"
tag = "fig4"
selection = "max-redundancy"
quantities = ["entropy_s", "chi_e1", "redundancy"]
p = [1.0]
gamma = [0.1]
omega_over_gamma = [0.1, 0.2, 0.5, 1, 2, 5, 10]
n = [8]
[redundancy]
delta = 0.9
threshold_mode = "literal"
"#;
    let spec = parse_config(text).unwrap().into_spec().unwrap();
    assert_eq!(spec, builtin_figure("fig4").unwrap());
}

#[test]
fn selftest_passes_and_is_reproducible() {
    let o = qdarwin(&["selftest", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let a = cmd_selftest(&SelftestOptions { seed: 3, ..Default::default() });
    let b = cmd_selftest(&SelftestOptions { seed: 3, ..Default::default() });
    assert_eq!(a, b);
    assert_eq!(a.render(), String::from_utf8_lossy(&o.stdout));
}

#[test]
fn perturbed_entropy_makes_selftest_fail() {
    let o = qdarwin(&["selftest", "--entropy-base", "2.718281828459045"]);
    assert_eq!(o.status.code(), Some(1));
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("FAIL  entropy-constant"), "{out}");
    assert!(stderr(&o).contains("entropy-constant"));
}
