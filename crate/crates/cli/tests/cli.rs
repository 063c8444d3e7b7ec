use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn quadric() -> String {
    corpus_dir().join("quadric_cone.ring").display().to_string()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hypersurf"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, text) = run(args);
    (
        code,
        serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")),
    )
}

#[test]
fn theta_anchor_on_the_quadric_cone() {
    let q = quadric();
    let (code, v) = run_json(&["-i", &q, "theta", "--left", "Mxz", "--right", "Myw"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["theta"], 1);
    assert_eq!(v["results"]["stabilized"], true);
    assert_eq!(v["verdicts"][0], "PASS");
    assert_eq!(v["ring_fingerprint"].as_str().unwrap().len(), 64);
}

#[test]
fn endo_check_reports_the_dual_pairing() {
    let (code, v) = run_json(&["-i", &quadric(), "check", "endo", "--module", "I_xz"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"][0], "PASS");
    assert_eq!(v["results"]["measured"]["theta_dual"], -1);
}

#[test]
fn resolve_residue_field() {
    let (code, v) = run_json(&[
        "-i",
        &quadric(),
        "resolve",
        "--module",
        "K",
        "--ring",
        "R",
        "--steps",
        "6",
    ]);
    assert_eq!(code, 0);
    let betti: Vec<u64> = v["results"]["betti"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b.as_u64().unwrap())
        .collect();
    assert_eq!(betti, [1, 4, 7, 8, 8, 8, 8]);
    assert_eq!(v["results"]["periodicity"], 3);
}

#[test]
fn shipped_corpus_passes() {
    let dir = corpus_dir().display().to_string();
    let (code, v) = run_json(&["corpus", &dir]);
    assert_eq!(code, 0, "{v:#}");
    assert_eq!(v["results"]["violations"], 0);
    assert_eq!(v["results"]["pass"], true);
}

#[test]
fn corrupted_expectation_fails_with_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(quadric()).unwrap();
    let bad = text.replacen("on = P_anchor  value = 1 ", "on = P_anchor  value = 7 ", 1);
    assert_ne!(bad, text);
    std::fs::write(dir.path().join("bad.ring"), &bad).unwrap();
    let line = bad.lines().position(|l| l.contains("value = 7")).unwrap() + 1;
    let (code, v) = run_json(&["corpus", &dir.path().display().to_string()]);
    assert_eq!(code, 3);
    let miss: Vec<&Value> = v["results"]["entries"][0]["expectations"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["matched"] == false)
        .collect();
    assert_eq!(miss.len(), 1);
    assert_eq!(miss[0]["line"], line);
    assert_eq!(miss[0]["actual"], "1");
}

#[test]
fn empty_corpus_warns_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = run_json(&["corpus", &dir.path().display().to_string()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn deterministic_output_is_byte_identical() {
    let q = quadric();
    let args = ["-i", q.as_str(), "--deterministic", "bourbaki", "--module", "IplusR"];
    let (c1, a) = run(&args);
    let (c2, b) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(!a.contains("timing_ms"));
}

#[test]
fn cache_directory_changes_no_value() {
    let dir = corpus_dir().display().to_string();
    let cache = tempfile::tempdir().unwrap();
    let cache_arg = cache.path().display().to_string();
    let (_, plain) = run(&["--deterministic", "corpus", &dir]);
    let (_, cold) = run(&["--deterministic", "--cache-dir", &cache_arg, "corpus", &dir]);
    let (_, warm) = run(&["--deterministic", "--cache-dir", &cache_arg, "corpus", &dir]);
    let results = |s: &str| serde_json::from_str::<Value>(s).unwrap()["results"].clone();
    assert_eq!(results(&plain), results(&cold));
    assert_eq!(results(&plain), results(&warm));

    let (code, v) = run_json(&["--cache-dir", &cache_arg, "cache", "verify"]);
    assert_eq!(code, 0);
    assert!(v["results"]["entries"].as_u64().unwrap() > 0);
}

#[test]
fn syntax_errors_exit_one_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.ring");
    std::fs::write(
        &path,
        "ring { p = 101  f = x*y - z*w }\nmodule M { gens = 1  gendegs = 0\n  rel = x + y^2 }\n",
    )
    .unwrap();
    let (code, v) = run_json(&["-i", &path.display().to_string(), "info"]);
    assert_eq!(code, 1);
    let err = v["error"].as_str().unwrap();
    assert!(err.contains("line 3"), "{err}");
    assert_eq!(v["verdicts"][0], "ERROR");
}

#[test]
fn ineligible_theta_exits_two() {
    let path = corpus_dir().join("nonisolated.ring").display().to_string();
    let (code, v) = run_json(&["-i", &path, "theta", "--pair", "F_bad"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdicts"][0], "INELIGIBLE");
}

#[test]
fn printed_input_reparses_to_the_same_text() {
    let (code, v) = run_json(&["-i", &quadric(), "print"]);
    assert_eq!(code, 0);
    let canonical = v["results"]["canonical"].as_str().unwrap().to_string();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("again.ring");
    std::fs::write(&path, &canonical).unwrap();
    let (_, again) = run_json(&["-i", &path.display().to_string(), "print"]);
    assert_eq!(again["results"]["canonical"].as_str().unwrap(), canonical);
}

#[test]
fn text_format_renders_the_same_report() {
    let (code, text) = run(&["-i", &quadric(), "--format", "text", "chi", "--pair", "P_anchor"]);
    assert_eq!(code, 0);
    assert!(text.contains("chi_s: 1"), "{text}");
}
