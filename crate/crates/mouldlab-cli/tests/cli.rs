use std::process::{Command, Output};

use mouldlab::exactalg::{unit, Poly, RatFun, Scalar};
use mouldlab::library::{build_that01, thm34_correction};
use mouldlab::serial::mould_from_json;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mouldlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn eval_that01_depth_two() {
    let o = run(&["eval", "That01", "--max-depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "depth 2: (1/12)*u1 - (1/12)*u2"), "{out}");
}

#[test]
fn fay_of_dar_inverse_that01_vanishes() {
    let o = run(&["eval", "fay(darinv(That01))", "--max-depth", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 6);
    assert!(out.lines().all(|l| l.ends_with(": 0")), "{out}");
}

#[test]
fn thm34corr_depth_five_matches_library() {
    let o = run(&["eval", "thm34corr(5)", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let m = mould_from_json(&serde_json::from_str(&stdout(&o)).unwrap()).unwrap();
    let expected = thm34_correction(5, &mouldlab::mouldcore::dar_inv(&build_that01(5)).unwrap()).unwrap();
    assert!(m.component(5).equals(&expected).unwrap());
    for r in 1..5 {
        assert!(m.component(r).is_zero(), "depth {r}");
    }
}

#[test]
fn thm34corr_depth_five_closed_form() {
    // zeta(5)(u2+u3+u4+u5) + zeta(3)((u2-u3)/(12 u2 u3) - (u4-u5)/(12 u4 u5))
    let o = run(&["eval", "thm34corr(5)", "--format", "json"]);
    let m = mould_from_json(&serde_json::from_str(&stdout(&o)).unwrap()).unwrap();
    let frac = |num: [i64; 5], a: usize, b: usize| {
        RatFun::from_poly(Poly::linear(&num).scale(&Scalar::frac(1, 12)))
            .div_linear(&unit(5, a))
            .unwrap()
            .div_linear(&unit(5, b))
            .unwrap()
    };
    let z5_part = RatFun::from_poly(Poly::linear(&[0, 1, 1, 1, 1]).scale(&Scalar::zeta(5)));
    let z3_part = frac([0, 1, -1, 0, 0], 1, 2).sub(&frac([0, 0, 0, 1, -1], 3, 4)).scale(&Scalar::zeta(3));
    let expected = z5_part.add(&z3_part);
    assert!(m.component(5).equals(&expected).unwrap(), "{}", m.component(5).render('u'));
}

#[test]
fn check_fay_that01_holds() {
    let o = run(&["check", "fay", "That01", "--max-depth", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn check_krv_on_dari_bracket_holds() {
    let o = run(&["check", "krv", "delta(dari(U[2],U[4]))"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn check_alternal_reports_witness() {
    let o = run(&["check", "alternal", "mu(U[2],U[2])"]);
    assert_eq!(o.status.code(), Some(1));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["depths"]["2"]["verdict"], "fails");
    assert!(j["depths"]["2"]["residue"].is_object());
    assert!(!j["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn parse_error_exits_two_with_position() {
    let o = run(&["eval", "mu(U[2]"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("7"), "{err}");
}

#[test]
fn type_error_exits_two() {
    let o = run(&["eval", "circ(U[4])"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_file_receives_output() {
    let dir = std::env::temp_dir().join(format!("mouldlab-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("that01.json");
    let o = run(&["eval", "That01", "--max-depth", "4", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let m = mould_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert!(m.equals(&build_that01(4)));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn ma_of_commutator() {
    let o = run(&["ma", "[a,b]", "--max-weight", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "depth 1: -u1"), "{}", stdout(&o));
}

#[test]
fn report_is_deterministic_and_passes() {
    let a = run(&["report", "--suite", "acceptance", "--seed", "7"]);
    let b = run(&["report", "--suite", "acceptance", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let j: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(j["passed"], true);
    assert_eq!(j["partial"], false);
    assert_eq!(j["criteria"].as_array().unwrap().len(), 10);
}

#[test]
fn shallow_report_is_flagged_partial() {
    let o = run(&["report", "--seed", "7", "--max-depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["partial"], true);
    assert_eq!(j["passed"], true);
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_mouldlab"))
        .args(["report", "--max-depth", "1"])
        .env("MOULDLAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
