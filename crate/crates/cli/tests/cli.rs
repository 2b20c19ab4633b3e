use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasiconv")).args(args).output().expect("spawning the binary")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("quasiconv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn power_of_identity_half() {
    let out = run(&["power", "--f", "half_plane", "--alpha", "0.5", "--n-trunc", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    let re: Vec<f64> = v["coeffs"].as_array().unwrap().iter().map(|c| c[0].as_f64().unwrap()).collect();
    let expected = [1.0, 0.5, 0.375];
    for (a, b) in re.iter().zip(expected) {
        assert!((a - b).abs() < 1e-14, "{re:?}");
    }
}

#[test]
fn power_csv_has_header() {
    let out = run(&["--format", "csv", "power", "--f", "identity", "--alpha", "2", "--n-trunc", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "k,re,im\n1,1,0\n2,0,0\n");
}

#[test]
fn check_identity_passes() {
    let out = run(&["--trunc", "64", "check", "--f", "identity", "--spec", "1,1,0.9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!((v["min_re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn failed_check_exits_one() {
    let out = run(&["check", "--f", "half_plane", "--starlike", "0.9"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn operator_phi1_multipliers() {
    let out = run(&["--trunc", "6", "--format", "csv", "operator", "--kind", "phi1", "--alpha", "1", "--c", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,mu_k"));
    for line in lines {
        let (k, mu) = line.split_once(',').unwrap();
        let k: f64 = k.parse().unwrap();
        let mu: f64 = mu.parse().unwrap();
        assert!((mu - 2.0 / (k + 1.0)).abs() < 1e-14, "{line}");
    }
}

#[test]
fn convolve_matches_oracle() {
    let out = run(&["--trunc", "128", "--oracle", "convolve", "--f", "half_plane", "--g", "identity", "--alpha", "0.7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn function_from_file() {
    let exported = run(&["--trunc", "8", "generate", "--spec", "0,1,0", "--atoms", "antipodal"]);
    assert!(exported.status.success());
    let path = scratch("member.json", &stdout(&exported));
    let arg = format!("@{}", path.display());
    let out = run(&["--trunc", "8", "power", "--f", &arg, "--alpha", "1", "--n-trunc", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn config_file_with_override() {
    let path = scratch("run.conf", "# small run\ntruncation = 16\nformat = csv\n");
    let conf = path.to_str().unwrap();
    let from_file = run(&["--config", conf, "power", "--f", "identity", "--alpha", "1"]);
    assert!(from_file.status.success());
    assert!(stdout(&from_file).starts_with("k,re,im\n"));
    assert_eq!(stdout(&from_file).lines().count(), 17);
    let overridden = run(&["--config", conf, "--format", "json", "power", "--f", "identity", "--alpha", "1"]);
    assert!(overridden.status.success());
    assert_eq!(json(&overridden)["order"], 16);
}

#[test]
fn bad_config_exits_two() {
    let path = scratch("bad.conf", "tolerance = -1\n");
    let out = run(&["--config", path.to_str().unwrap(), "verify", "psi"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tolerance"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["power", "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(run(&["power", "--f", "identity", "--alpha", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["--config", "/nonexistent/run.conf", "verify", "psi"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--f", "no_such_function", "--convex"]).status.code(), Some(2));
}

#[test]
fn verify_psi_passes() {
    let out = run(&["verify", "psi"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["suite"], "psi");
    assert_eq!(v["pass"], true);
    assert!(String::from_utf8_lossy(&out.stderr).contains("psi: PASS"));
}

#[test]
fn verify_sequences_lists_exception() {
    let out = run(&["verify", "sequences"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(!v["exceptions"].as_array().unwrap().is_empty());
}

#[test]
fn verify_is_deterministic_across_workers() {
    for suite in ["psi", "lemma4"] {
        let one = run(&["--trunc", "128", "--workers", "1", "verify", suite]);
        let two = run(&["--trunc", "128", "--workers", "2", "verify", suite]);
        assert_eq!(one.status.code(), two.status.code());
        assert_eq!(one.stdout, two.stdout, "{suite}");
    }
}

#[test]
fn verify_csv_header() {
    let out = run(&["--format", "csv", "verify", "psi"]);
    assert!(stdout(&out).starts_with("suite,section,label,pass,min_re,threshold,margin,guard\n"));
}

#[test]
fn plotdata_tables() {
    let min_re = run(&["plotdata", "min-re-vs-r", "--f", "half_plane", "--spec", "0,1,0"]);
    assert!(min_re.status.success());
    let text = stdout(&min_re);
    assert!(text.starts_with("r,min_re\n"));
    let row = text.lines().find(|l| l.starts_with("0.5,")).unwrap();
    let v: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 2.0 / 3.0).abs() < 1e-9);

    let heat = run(&["--trunc", "64", "--angles", "8", "plotdata", "kernel-re-heatmap"]);
    assert!(stdout(&heat).starts_with("r,theta,re\n"));

    let region = run(&["plotdata", "convex-null-region"]);
    assert!(stdout(&region).starts_with("alpha,m,convex,first_violation\n"));
}
