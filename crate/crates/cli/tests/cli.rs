use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

const L0: &str = r#"{"kind":"lts","states":["s0","s1"],"actions":["a","b"],
  "transitions":[{"src":"s0","dst":"s1","labels":["a"]},{"src":"s1","dst":"s1","labels":[]}]}"#;
const K0: &str = r#"{"kind":"ks","states":["t0","t1"],"props":["p"],
  "transitions":[{"src":"t0","dst":"t1","labels":[]},{"src":"t1","dst":"t1","labels":[]}],
  "labeling":{"t0":{"p":"false"},"t1":{"p":"true"}}}"#;
const M0: &str = r#"{"kind":"kmts","states":["u0","u1"],"actions":["a!","b?"],"props":["p"],
  "transitions":[{"src":"u0","dst":"u1","labels":["a!"]},{"src":"u0","dst":"u0","labels":["b?"]}],
  "labeling":{"u0":{"p":"bot"},"u1":{"p":"true"}}}"#;
const T0: &str = r#"{"kind":"kts","states":["s0","s1"],"actions":["a"],"props":["p"],
  "transitions":[{"src":"s0","dst":"s1","labels":["a"]}],
  "labeling":{"s0":{"p":"false"},"s1":{"p":"true"}}}"#;

struct Fixtures {
    dir: TempDir,
}

impl Fixtures {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        for (name, text) in [("l0", L0), ("k0", K0), ("m0", M0), ("t0", T0)] {
            fs::write(dir.path().join(format!("{name}.json")), text).unwrap();
        }
        Fixtures { dir }
    }

    fn file(&self, name: &str) -> PathBuf {
        self.dir.path().join(format!("{name}.json"))
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tempobridge")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn check(f: &Fixtures, file: &str, logic: &str, state: &str, formula: &str) -> Output {
    let path = f.file(file);
    run(&["check", "--structure", path.to_str().unwrap(), "--logic", logic, "--state", state, "--formula", formula])
}

#[test]
fn check_verdicts_and_exit_codes() {
    let f = Fixtures::new();
    let o = check(&f, "k0", "CTL", "t0", "E[!p U p]");
    assert_eq!((stdout(&o).as_str(), o.status.code()), ("true\n", Some(0)));
    let o = check(&f, "m0", "UPML", "u0", "AX p");
    assert_eq!((stdout(&o).as_str(), o.status.code()), ("bot\n", Some(1)));
    let o = check(&f, "k0", "CTL", "t0", "p");
    assert_eq!((stdout(&o).as_str(), o.status.code()), ("false\n", Some(1)));
    let o = check(&f, "l0", "ACTL*", "s0", "E (X_a true & X !X_a true)");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn pairing_and_parse_errors_exit_2() {
    let f = Fixtures::new();
    let o = check(&f, "l0", "CTL", "s0", "p");
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
    assert_eq!(check(&f, "k0", "CTL", "t0", "E[p U").status.code(), Some(2));
    assert_eq!(check(&f, "k0", "CTL", "nowhere", "p").status.code(), Some(2));
    assert_eq!(run(&["check"]).status.code(), Some(2));
}

#[test]
fn bounded_star_check() {
    let f = Fixtures::new();
    let path = f.file("k0");
    let o = run(&[
        "check", "--structure", path.to_str().unwrap(), "--logic", "CTL*", "--state", "t0", "--formula", "E (X p & X X p)",
        "--bound", "1",
    ]);
    assert!(stdout(&o).ends_with(" (bounded)\n"), "{}", stdout(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_tempobridge"))
        .args(["check", "--structure", path.to_str().unwrap(), "--logic", "CTL*", "--state", "t0"])
        .args(["--formula", "E (X p & X X p)", "--enumerate"])
        .env("TEMPOBRIDGE_CEILING", "2")
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "true (bounded)\n");
}

#[test]
fn map_structures_and_formulas() {
    let f = Fixtures::new();
    let o = run(&["map", "--mapping", "ks", "--structure", f.file("l0").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["states"].as_array().unwrap().len(), 4);
    assert_eq!(run(&["map", "--mapping", "ks", "--structure", f.file("k0").to_str().unwrap()]).status.code(), Some(2));

    let out = f.dir.path().join("mapped.json");
    let o = run(&[
        "map", "--mapping", "ks2'", "--structure", f.file("t0").to_str().unwrap(), "--formula", "E[p {a}U{tau} p]", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("E["));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["kind"], "ks");
}

#[test]
fn paths_dot_fmt() {
    let f = Fixtures::new();
    let o = run(&["paths", "--structure", f.file("l0").to_str().unwrap(), "--state", "s0", "--bound", "3"]);
    assert_eq!(stdout(&o), "s0 -{a}-> s1 | s1 -tau-> s1\n");
    let o = run(&["dot", "--structure", f.file("l0").to_str().unwrap()]);
    assert!(stdout(&o).starts_with("digraph"));
    let o = run(&["fmt", "--logic", "CTL", "--formula", "E [ !p U p ]"]);
    assert_eq!(stdout(&o), "E[!p U p]\n");
}

#[test]
fn xcheck_reports() {
    let o = run(&["xcheck", "--mapping", "ks", "--trials", "200", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["trials"], 200);
    let o = run(&["xcheck", "--mapping", "ks2'", "--trials", "200", "--seed", "7", "--mutant"]);
    assert_eq!(o.status.code(), Some(3));
    let a = run(&["xcheck", "--mapping", "lts2", "--trials", "50", "--seed", "1"]);
    let b = run(&["xcheck", "--mapping", "lts2", "--trials", "50", "--seed", "1"]);
    let strip = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_str(&stdout(o)).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_seconds");
        v
    };
    assert_eq!(strip(&a), strip(&b));
}
