mod common;

use std::path::PathBuf;
use std::process::Command;

use common::{corpus_dir, corpus_file, examples};
use tangent_cli::corpus::run_corpus;
use tangent_cli::plot::emit_plot;
use tangent_cli::{parse_problem, replay, run, CertBundle};
use tangent_core::numerics::Rational;

fn tangent(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tangent")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tangent-cli-{}-{tag}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes() {
    let dir = scratch("exit");
    let bad = dir.join("bad.ineq");
    std::fs::write(&bad, "name: bad\nvars: two\n").unwrap();
    let junk = dir.join("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    let ex08 = corpus_file("ex08.ineq");
    let (neg_bound, neg_strict, neg_symbolic) = (
        corpus_file("negative/ex01_bound.ineq"),
        corpus_file("negative/ex01_strict.ineq"),
        corpus_file("negative/ex04_symbolic.ineq"),
    );
    let corpus = corpus_dir();
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["check", path(&ex08)], 0),
        (vec!["check", path(&ex08), "--json"], 0),
        (vec!["check", path(&neg_bound)], 1),
        (vec!["check", path(&neg_strict)], 1),
        (vec!["check", path(&neg_symbolic)], 2),
        (vec!["check", path(&ex08), "--strategy", "interval"], 0),
        (vec!["check", path(&ex08), "--strategy", "bogus"], 3),
        (vec!["check", path(&bad)], 3),
        (vec!["check", "/nonexistent/problem.ineq"], 3),
        (vec!["replay", path(&junk), path(&ex08)], 3),
        (vec!["plot", path(&ex08), "--samples", "1"], 3),
        (vec!["plot", path(&ex08), "--samples", "5"], 0),
        (vec!["corpus", path(&corpus)], 0),
        (vec!["frobnicate"], 3),
        (vec![], 3),
    ];
    for (args, want) in cases {
        let (code, _, err) = tangent(&args);
        assert_eq!(code, want, "tangent {}: {err}", args.join(" "));
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn input_errors_name_the_line() {
    let dir = scratch("lines");
    let bad = dir.join("bad.ineq");
    std::fs::write(&bad, "name: bad\nvars: 3\ndomain: (0, 1\n").unwrap();
    let (code, _, err) = tangent(&["check", path(&bad)]);
    assert_eq!(code, 3);
    assert!(err.contains("line 3, column 9"), "{err}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn corpus_runs_are_deterministic_and_as_expected() {
    let a = run_corpus(&corpus_dir()).unwrap();
    let b = run_corpus(&corpus_dir()).unwrap();
    assert_eq!(a.canonical_json(), b.canonical_json());
    assert_eq!(a.mismatched, 0, "{}", a.to_text());
    assert_eq!(a.entries.len(), 16);
    for e in a.entries.iter().filter(|e| e.path.starts_with("negative/")) {
        assert_ne!(e.verdict, "proved", "{}", e.path);
    }
    let (code, out, _) = tangent(&["corpus", path(&corpus_dir()), "--json"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim_end(), a.canonical_json());
}

#[test]
fn problem_files_round_trip() {
    let mut files = Vec::new();
    for dir in [corpus_dir(), corpus_dir().join("negative")] {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.extension().is_some_and(|x| x == "ineq") {
                files.push(p);
            }
        }
    }
    assert_eq!(files.len(), 16);
    for f in files {
        let p = parse_problem(&std::fs::read_to_string(&f).unwrap()).unwrap();
        let text = p.to_string();
        let back = parse_problem(&text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", f.display()));
        assert_eq!(back, p, "{}", f.display());
        assert_eq!(back.to_string(), text);
    }
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

fn dec(s: &str) -> Rational {
    Rational::from_decimal_str(s).unwrap()
}

#[test]
fn plot_rows_meet_at_tangency() {
    let eps = Rational::new(1, 1_000_000_000_000i64);
    let p = common::load("ex01.ineq");
    let csv = emit_plot(&p, 3).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "x,f,g,kind");
    let t: Vec<Vec<String>> = rows(&csv).into_iter().filter(|r| r[3] == "tangency").collect();
    assert_eq!(t.len(), 1);
    assert!((dec(&t[0][0]) - Rational::new(1, 3)).abs() <= eps);
    assert!((dec(&t[0][1]) + Rational::from(2)).abs() <= eps);
    assert_eq!(dec(&t[0][2]), Rational::from(-2));

    let p = common::load("ex09.ineq");
    let csv = emit_plot(&p, 50).unwrap();
    let one = rows(&csv).into_iter().find(|r| r[3] == "tangency").unwrap();
    assert_eq!(dec(&one[0]), Rational::from(1));
    assert_eq!(dec(&one[1]), Rational::from(0));
    assert_eq!(dec(&one[2]), Rational::from(0));

    assert!(emit_plot(&p, 1).is_err());
    let (code, out, _) = tangent(&["plot", path(&corpus_file("ex09.ineq")), "--samples", "50"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim_end(), csv.trim_end());
}

#[test]
fn emitted_certificates_replay_in_a_fresh_process() {
    let dir = scratch("replay");
    for (name, p) in examples() {
        let file = corpus_file(&name);
        let cert = dir.join(format!("{name}.json"));
        let (code, _, err) = tangent(&["check", path(&file), "--emit-cert", path(&cert)]);
        assert_eq!(code, 0, "{name}: {err}");
        let bundle: CertBundle = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
        assert_eq!(replay(&bundle, &p), Ok(()), "{name}");
        let (code, out, _) = tangent(&["replay", path(&cert), path(&file)]);
        assert_eq!((code, out.trim()), (0, "accepted"), "{name}");
    }
    // a certificate does not replay against another problem
    let (code, out, _) = tangent(&["replay", path(&dir.join("ex01.ineq.json")), path(&corpus_file("ex03.ineq"))]);
    assert_eq!(code, 1, "{out}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn reports_are_stable_across_runs() {
    for (name, p) in examples() {
        let mut a = run(&p, None).report;
        let mut b = run(&p, None).report;
        a.timing_ms = 0;
        b.timing_ms = 0;
        assert_eq!(a.to_json(), b.to_json(), "{name}");
    }
}
