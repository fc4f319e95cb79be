//! Runs the `lgb` binary on the files in `problems/`.

use std::path::PathBuf;
use std::process::{Command, Output};

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name)
}

fn lgb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgb")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("lgb-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

const F: &str = "2*x^2*y^-1 + x^-3*y - 3*y^-5";

#[test]
fn reduce_prints_remainder_then_quotients() {
    let p = problem("division_2var.lgb");
    let o = lgb(&["reduce", p.to_str().unwrap(), "--poly", F]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "2*x^2*y^-1 - y^3 - 3*x^-1*y^-1\nx^-1*y^2 + 3*x^-2*y^-2\n-3*x^-2*y^-4\n"
    );
}

#[test]
fn info_reports_leading_data() {
    let p = problem("division_2var.lgb");
    let o = lgb(&["info", p.to_str().unwrap(), "--poly", F]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["lm: y^-5", "lc: -3", "lm_1: x^-3*y", "T_2: x*y^2"] {
        assert!(out.lines().any(|l| l == line), "missing {line:?} in\n{out}");
    }
    let o = lgb(&["info", p.to_str().unwrap()]);
    assert!(stdout(&o).contains("cones: 3\n"));
}

#[test]
fn gb_of_three_variable_ideal() {
    let p = problem("degmin_3var.lgb");
    let o = lgb(&["gb", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 3, "{out}");
    assert!(out.lines().any(|l| l == "-y^4*z + x^-1*y^-2*z^-1"));
    assert_eq!(stdout(&lgb(&["gb", p.to_str().unwrap()])), out);
}

#[test]
fn every_problem_file_runs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems");
    let mut seen = 0;
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "lgb") {
            let o = lgb(&["gb", p.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{}", p.display());
            seen += 1;
        }
    }
    assert!(seen >= 5);
}

#[test]
fn exit_codes() {
    let p = problem("division_2var.lgb");
    let p = p.to_str().unwrap();
    let member = lgb(&["member", p, "--poly", "x*y^-1 - y^3"]);
    assert_eq!((member.status.code(), stdout(&member).as_str()), (Some(0), "true\n"));
    let not = lgb(&["member", p, "--poly", "x"]);
    assert_eq!((not.status.code(), stdout(&not).as_str()), (Some(3), "false\n"));

    let bad = scratch("bad.lgb", "ring Q\nvars x\norder bogus\ngens:\nx\n");
    let o = lgb(&["gb", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(lgb(&["gb", "/nonexistent/file.lgb"]).status.code(), Some(1));

    let gf9 = problem("gf9_2var.lgb");
    let o = lgb(&["gb", gf9.to_str().unwrap(), "--max-basis", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_reports_failing_pair() {
    let p = problem("division_2var.lgb");
    let o = lgb(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("false\nS-pair of generators 1 and 2"), "{out}");
}

#[test]
fn reduce_with_no_generators_returns_input() {
    let p = scratch("empty.lgb", "ring Q\nvars x y\norder degmin\ngens:\n");
    let o = lgb(&["reduce", p.to_str().unwrap(), "--poly", "x + y^-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "y^-1 + x\n");
}

#[test]
fn polytope_info_and_selftest() {
    let p = problem("segment_q2.lgb");
    let o = lgb(&["info", p.to_str().unwrap(), "--poly", "2*x + y"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("val_P: -1\n") && out.contains("in_P: y\n"), "{out}");

    let o = lgb(&["selftest", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}
