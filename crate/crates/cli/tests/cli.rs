use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use unimitl::automaton::Po2dta;
use unimitl::formula::parse;
use unimitl::lbcompile::compile_lb;
use unimitl::oracle::holds_at;
use unimitl::word::{alphabet, TimedWord};

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(name).to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unimitl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn eval_agrees_with_the_library() {
    let cases = [
        ("F(0,inf)[a & F(2,inf) c]", "a@0 c@5/2", 0),
        ("F(0,inf)[a & F(2,inf) c]", "b@0 a@1/2 c@3", 0),
        ("P(0,1] a", "a@0 b@1", 1),
        (
            "!(a & !F[1,2] c) & !F(0,inf)(a & !F[1,2] c)",
            "a@0 c@3/2",
            0,
        ),
    ];
    for (f, w, pos) in cases {
        let expected = holds_at(&TimedWord::parse(w).unwrap(), pos, &parse(f).unwrap()).unwrap();
        let o = cli(&[
            "eval",
            "--formula",
            f,
            "--word",
            w,
            "--pos",
            &pos.to_string(),
        ]);
        assert_eq!(stdout(&o), expected.to_string(), "{f} on {w}");
        assert_eq!(o.status.code(), Some(if expected { 0 } else { 1 }));
    }
}

#[test]
fn unsatisfiable_formula_exits_one() {
    let o = cli(&["sat", "--formula", "a & !a"]);
    assert_eq!(stdout(&o), "UNSAT-within-bounds");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sat_witness_satisfies_the_formula() {
    let f = "F(0,inf)[a & F(2,inf) c]";
    let o = cli(&[
        "sat",
        "--formula",
        f,
        "--bounds",
        "3,2,5",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(doc["verdict"], "SAT");
    let w = TimedWord::parse(doc["witness"].as_str().unwrap()).unwrap();
    assert!(holds_at(&w, 0, &parse(f).unwrap()).unwrap());
}

#[test]
fn budget_exhaustion_is_inconclusive() {
    let o = cli(&["sat", "--formula", "a & !a", "--budget", "0"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn run_traces_the_example_automaton() {
    let o = cli(&[
        "run",
        "--automaton",
        &fixture("a_ex.json"),
        "--word",
        "c@1/5 b@6/5",
        "--trace",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("accept"));
    assert!(out.lines().count() > 1);
    assert!(out.lines().last().unwrap().trim_start().starts_with("t @"));

    let o = cli(&[
        "run",
        "--automaton",
        &fixture("a_ex.json"),
        "--word",
        "c@0 b@3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["verdict"], "reject");
}

#[test]
fn compiled_automaton_round_trips_through_json() {
    let f = "!F(0,inf)(a & !F(1,inf) b)";
    let o = cli(&["compile", "--formula", f, "--fragment", "lb"]);
    assert_eq!(o.status.code(), Some(0));
    let from_cli = Po2dta::from_json(&stdout(&o)).unwrap();
    let direct = compile_lb(&parse(f).unwrap(), &alphabet(["a", "b"])).unwrap();
    for w in ["a@0 b@2", "a@0 b@1", "b@0", "a@0 a@1/2 b@3/2"] {
        let w = TimedWord::parse(w).unwrap();
        assert_eq!(from_cli.accepts(&w).unwrap(), direct.accepts(&w).unwrap());
    }
    let dot = cli(&["compile", "--formula", f, "--fragment", "lb", "--dot"]);
    assert!(stdout(&dot).starts_with("digraph"));
}

#[test]
fn extract_names_a_fragment() {
    let o = cli(&[
        "extract",
        "--automaton",
        &fixture("a_ex.json"),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert!(parse(doc["formula"].as_str().unwrap()).is_ok());
}

#[test]
fn equiv_reports_a_distinguishing_word() {
    let o = cli(&[
        "equiv",
        "--lhs",
        "F(0,inf)[a & F(2,inf) c]",
        "--rhs",
        "F(0,1)[a & F(1,2) c]",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("inequivalent"));
    let o = cli(&["equiv", "--lhs", "!(a | b)", "--rhs", "!a & !b"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn bench_instances_load_and_check_their_family() {
    for (family, file) in [
        ("nexptime", "nexptime_single.json"),
        ("expspace", "expspace_single.json"),
        ("pspace", "pspace_corridor.json"),
    ] {
        let o = cli(&[
            "bench",
            "--family",
            family,
            "--instance",
            &fixture(file),
            "--format",
            "json",
        ]);
        assert_eq!(o.status.code(), Some(0), "{family}");
        assert!(
            parse(json(&o)["formula"].as_str().unwrap()).is_ok(),
            "{family}"
        );
    }
    let o = cli(&[
        "bench",
        "--family",
        "pspace",
        "--instance",
        &fixture("nexptime_single.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_input_exits_two() {
    for args in [
        vec!["parse", "--formula", "F[inf a"],
        vec!["eval", "--formula", "a", "--word", "a@1 b@0"],
        vec!["run", "--automaton", "/nonexistent.json", "--word", "a@0"],
        vec!["no-such-command"],
    ] {
        let o = cli(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
}

#[test]
fn size_report_is_json() {
    let o = cli(&["size-report", "--formula", "F(0,3) c", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["modalities"], 1);
}
