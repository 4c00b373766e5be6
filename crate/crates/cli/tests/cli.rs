use std::path::PathBuf;
use std::process::{Command, Output};

use hsc_cli::Report;

fn hsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsc")).args(args).output().unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn report(args: &[&str]) -> (Report, i32) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let mut full: Vec<&str> = args.to_vec();
    let out_s = out.display().to_string();
    full.extend(["-q", "--out", &out_s]);
    let o = hsc(&full);
    let text = std::fs::read_to_string(&out).unwrap_or_else(|_| panic!("{}", String::from_utf8_lossy(&o.stderr)));
    (Report::from_json(&text).unwrap(), o.status.code().unwrap())
}

#[test]
fn weyl_a2_borel() {
    let (r, code) = report(&["weyl", "--preset", "A2", "--levi", ""]);
    assert_eq!(code, 0);
    let w = r.weyl.unwrap();
    assert_eq!((w.counts.order, w.counts.min_coset_reps), (6, 6));
    let text = String::from_utf8(hsc(&["weyl", "--preset", "A2", "--levi", ""]).stdout).unwrap();
    assert!(text.contains("|W| = 6") && text.contains("|W^P| = 6"), "{text}");
}

#[test]
fn bk_verify_a2_support_one() {
    let (r, code) = report(&["bk-verify", "--preset", "A2", "--levi", "", "--t-support", "1"]);
    assert_eq!(code, 0);
    let bk = r.bk.as_ref().unwrap();
    assert_eq!(bk.degeneration_page, Some(2));
    assert_eq!(bk.poincare.as_deref(), Some(&[1, 2, 2, 1][..]));
    assert_eq!(bk.factorization().as_deref(), Some("(1 + q)(1 + q + q^2)"));
    assert!(r.passed && r.verdicts.iter().all(|v| v.passed));
    let text = String::from_utf8(hsc(&["bk-verify", "--preset", "A2", "--levi", "", "--t-support", "1"]).stdout).unwrap();
    assert!(text.contains("factorization: (1 + q)(1 + q + q^2)"), "{text}");
    assert!(text.contains("wall time"));
}

#[test]
fn sl2_relative_to_cartan() {
    let (r, code) = report(&["cohomology", "--custom", &data("sl2.alg"), "--k", "h"]);
    assert_eq!(code, 0);
    assert_eq!(r.cohomology.unwrap().betti, vec![1, 0, 1]);
}

#[test]
fn config_file_matches_flags() {
    let (a, _) = report(&["bk-verify", "--config", &data("a2_full_flag.toml")]);
    let (b, _) = report(&["bk-verify", "--preset", "A2", "--levi", "", "--t-support", "1"]);
    assert_eq!(a, b);
}

#[test]
fn wall_time_stays_out_of_the_report() {
    let (r, _) = report(&["spectral", "--custom", &data("heisenberg.alg"), "--ideal", "3"]);
    let json = r.to_json();
    assert!(!json.contains("wall") && !json.contains("elapsed"));
    assert_eq!(r.schema, "hsc-report/1");
    assert_eq!(Report::from_json(&json).unwrap(), r);
}

#[test]
fn fractional_structure_constants() {
    let dir = tempfile::tempdir().unwrap();
    let alg = dir.path().join("half.alg");
    // [x, y] = y/2 on a two-dimensional solvable algebra.
    std::fs::write(&alg, "dim 2\n1 2 -> 2:1/2\n").unwrap();
    let (r, code) = report(&["cohomology", "--custom", alg.to_str().unwrap(), "--module", "adjoint"]);
    assert_eq!(code, 0);
    assert_eq!(r.cohomology.unwrap().module_dim, 2);
    assert!(r.instance.custom.is_some());
}

#[test]
fn jobs_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_hsc"))
        .args(["weyl", "--preset", "A3", "--levi", "2", "--kostant", "-q"])
        .env("HSC_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(hsc(&["weyl", "--preset", "E9"]).status.code(), Some(2));
    assert_eq!(hsc(&["weyl", "--preset", "A2", "--levi", "0"]).status.code(), Some(2));
    assert_eq!(hsc(&["bk-verify", "--preset", "A2", "--t-support", "3"]).status.code(), Some(2));
    assert_eq!(hsc(&["cohomology", "--custom", "/no/such/file.alg"]).status.code(), Some(2));
    assert_eq!(hsc(&["cohomology", "--custom", &data("sl2.alg"), "--k", "e,f"]).status.code(), Some(2));
    assert_eq!(hsc(&["cohomology"]).status.code(), Some(2));
    assert_eq!(hsc(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[instance]\npreset = 3\n").unwrap();
    let o = hsc(&["weyl", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.toml"));
}
