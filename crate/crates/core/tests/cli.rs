use std::process::{Command, Output};

use riordan::fixtures;
use riordan::render::{parse_csv, parse_json, parse_table};

fn riordan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riordan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn show_lucas_pseudo_involution() {
    let o = riordan(&["show", "lucas", "lucasf", "--rows", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let m = parse_table(&stdout(&o)).unwrap();
    let last: Vec<String> = m.row(8).iter().map(|x| x.to_string()).collect();
    assert_eq!(
        last,
        ["47", "967294", "447998", "136436", "30792", "5054", "558", "36", "1"]
    );
}

#[test]
fn formats_parse_back_to_the_same_triangle() {
    let base = ["pseudo", "power", "fib", "fibf", "2", "--rows", "9"];
    let run = |fmt: &str| {
        let mut args = vec!["--format", fmt];
        args.extend_from_slice(&base);
        let o = riordan(&args);
        assert_eq!(o.status.code(), Some(0), "{fmt}");
        stdout(&o)
    };
    let table = parse_table(&run("table")).unwrap();
    let csv = parse_csv(&run("csv")).unwrap();
    let (json, doc) = parse_json(run("json").trim()).unwrap();
    assert_eq!(table, csv);
    assert_eq!(table, json);
    assert_eq!(doc.order, 32);
    assert_eq!(&doc.f_coeffs[..4], ["0", "1", "3", "9"]);
    let col0: Vec<String> = table.column(0).iter().map(|x| x.to_string()).collect();
    assert_eq!(col0, ["1", "2", "5", "10", "20", "38", "71", "130", "235"]);
}

#[test]
fn pseudo_check_exit_codes() {
    let ok = riordan(&["pseudo", "check", "fib", "fibf"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("PASS"));
    let bad = riordan(&["pseudo", "check", "fib", "z*fib"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).starts_with("FAIL at order"));
}

#[test]
fn pseudo_from_g_prints_f() {
    let o = riordan(&["pseudo", "from-g", "1/(1-z)", "--rows", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("f: 0, 1, 1, 1, 1, 1"));
}

#[test]
fn rationals_render_as_fractions() {
    let o = riordan(&["az", "(1+2*z)/(1-z-z^2)", "(-2*z+z^2)/(1-z-z^2)", "--terms", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "A: -2, 1/2, -5/8\nZ: 3, 5/2, 25/8\n");
}

#[test]
fn errors_go_to_stderr_with_codes() {
    let parse = riordan(&["show", "1/(1-", "z"]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(parse.stdout.is_empty());
    assert!(!parse.stderr.is_empty());
    assert_eq!(riordan(&["show", "0", "z"]).status.code(), Some(3));
    assert_eq!(riordan(&["pseudo", "from-g", "1-z^2"]).status.code(), Some(4));
}

#[test]
fn verify_all_and_dump_round_trip() {
    let o = riordan(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let n = fixtures::builtin().len();
    assert!(stdout(&o).ends_with(&format!("{n} passed, 0 failed\n")));

    let dump = riordan(&["verify", "--dump"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fixtures.json");
    std::fs::write(&path, &dump.stdout).unwrap();
    let again = riordan(&["verify", "all", "--fixtures", path.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));
}

#[test]
fn tampered_fixture_file_reports_coordinates() {
    let mut all = fixtures::builtin();
    let lucas = all.iter_mut().find(|f| f.id == "lucas-pi").unwrap();
    lucas.rows[7][2] = "50037".into();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tampered.json");
    std::fs::write(&path, serde_json::to_string(&all).unwrap()).unwrap();
    let o = riordan(&["verify", "lucas-pi", "--fixtures", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("entry (7,2): expected 50037, got 50036"));
}
