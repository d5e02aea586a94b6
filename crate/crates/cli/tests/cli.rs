use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use proptest::prelude::*;
use serde_json::Value as Json;
use stieltjes::numerics::parse_rational;

fn stj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stj")).args(args).env_remove("STJ_MAX_DEGREE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn here(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn fixtures(kind: &str) -> Vec<PathBuf> {
    let mut v: Vec<_> = fs::read_dir(here("../dsl/tests/fixtures").join(kind))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "stj"))
        .collect();
    v.sort();
    v
}

fn json_lines(o: &Output) -> Vec<Json> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("{e}: {l}"))).collect()
}

/// Leaves of a JSON value in document order.
fn leaves(v: &Json, out: &mut Vec<String>) {
    match v {
        Json::Object(m) => m.values().for_each(|v| leaves(v, out)),
        Json::Array(a) => a.iter().for_each(|v| leaves(v, out)),
        Json::String(s) => out.push(s.clone()),
        other => out.push(other.to_string()),
    }
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn heaviside_program_compares_both_integrals() {
    let f = here("tests/fixtures/heaviside.stj");
    let o = stj(&["--format", "json", "run", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = &json_lines(&o)[0]["result"];
    assert_eq!(r["rds"]["value"]["value"], "1/3");
    assert_eq!(r["ds"]["value"]["value"], "3/4");
    assert_eq!(r["discrepancy"], "-5/12");
}

#[test]
fn constant_integrand_picks_up_total_mass() {
    let o = stj(&["--format", "json", "integrate", "5/2", "x^2 + heaviside(c=0, at=1)", "--on", "0,3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = &json_lines(&o)[0]["result"];
    assert_eq!(r["value"], serde_json::json!({"kind": "exact", "value": "25"}));
}

#[test]
fn mesh_probe_gap_stays_one() {
    let o = stj(&["--format", "json", "sums", "mrs", "heaviside(c=1)", "heaviside(c=1)", "--on=-1,1"]);
    assert_eq!(code(&o), 0);
    let rows = json_lines(&o)[0]["result"]["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["gap"] == "1"));
}

#[test]
fn json_rationals_reparse_identically() {
    for path in fixtures("valid") {
        let o = stj(&["--format", "json", "run", path.to_str().unwrap()]);
        for rec in json_lines(&o) {
            let mut ls = Vec::new();
            leaves(&rec, &mut ls);
            for s in ls {
                if let Ok(r) = parse_rational(&s) {
                    assert_eq!(r.to_string(), s, "{}", path.display());
                }
            }
        }
    }
}

#[test]
fn text_and_json_carry_the_same_values() {
    let mut paths = fixtures("valid");
    paths.push(here("tests/fixtures/heaviside.stj"));
    for path in paths {
        let p = path.to_str().unwrap();
        let (j, t) = (stj(&["--format", "json", "run", p]), stj(&["run", p]));
        assert_eq!(code(&j), code(&t), "{p}");
        let text = stdout(&t);
        let mut at = 0;
        for rec in json_lines(&j) {
            let mut ls = Vec::new();
            leaves(&rec, &mut ls);
            for leaf in ls {
                let found = text[at..].find(&leaf).unwrap_or_else(|| panic!("{p}: `{leaf}` missing from text output"));
                at += found + leaf.len();
            }
        }
    }
}

/// Exit code of every fixture, checked against the committed table.
#[test]
fn exit_codes_are_stable() {
    let table = fs::read_to_string(here("tests/fixtures/exit_codes.txt")).unwrap();
    let mut seen = Vec::new();
    for kind in ["valid", "invalid"] {
        for path in fixtures(kind) {
            let o = stj(&["run", path.to_str().unwrap()]);
            seen.push(format!("{kind}/{} {}", path.file_name().unwrap().to_string_lossy(), code(&o)));
        }
    }
    let want: Vec<&str> = table.lines().filter(|l| !l.is_empty()).collect();
    assert_eq!(seen, want);
}

#[test]
fn diagnostics_exit_two_with_position() {
    let o = stj(&["integrate", "x +", "x", "--on", "0,1"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).starts_with("f:1:4:"), "{}", stdout(&o));
    let o = stj(&["--format", "json", "integrate", "x +", "x", "--on", "0,1"]);
    let d = &json_lines(&o)[0]["diagnostic"];
    assert_eq!((d["code"].as_str(), d["line"].as_u64(), d["column"].as_u64()), (Some("E200"), Some(1), Some(4)));
}

#[test]
fn engine_errors_exit_three_with_a_code() {
    let o = stj(&["--format", "json", "integrate", "dirichlet", "x", "--on", "0,1"]);
    assert_eq!(code(&o), 3);
    assert_eq!(json_lines(&o)[0]["error"]["code"], "E309");
}

#[test]
fn run_continues_past_failing_queries() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_stj"))
        .args(["--format", "json", "run", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"let D = dirichlet; let X = x; integrate D dX on [0,1]; integrate X dX on [0,1];")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(code(&o), 3);
    let recs = json_lines(&o);
    assert!(recs[0].get("error").is_some());
    assert_eq!(recs[1]["result"]["value"]["value"], "1/2");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&stj(&["bogus"])), 1);
    assert_eq!(code(&stj(&["integrate", "x", "x", "--on", "1,0"])), 1);
    assert_eq!(code(&stj(&["run", "/nonexistent/file.stj"])), 1);
    assert_eq!(code(&stj(&["demo"])), 1);
    assert_eq!(code(&stj(&["--help"])), 0);
}

#[test]
fn degree_cap_follows_the_environment() {
    let args = ["integrate", "x^8", "x", "--on", "0,1"];
    assert_eq!(code(&stj(&args)), 2);
    let run = |v: &str| Command::new(env!("CARGO_BIN_EXE_stj")).args(args).env("STJ_MAX_DEGREE", v).output().unwrap();
    let o = run("8");
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("1/9"));
    assert_eq!(code(&run("eight")), 1);
}

#[test]
fn demo_depends_only_on_the_seed() {
    let a = stj(&["--seed", "11", "--format", "json", "demo"]);
    let b = stj(&["--seed", "11", "--format", "json", "demo"]);
    let c = stj(&["--seed", "12", "--format", "json", "demo"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn power_table_is_exact_past_the_default_cap() {
    let o = stj(&["--format", "json", "table", "x + heaviside(c=1, at=1/2)", "--on", "0,1", "--count", "30"]);
    assert_eq!(code(&o), 0);
    let rows = json_lines(&o)[0]["result"]["rows"].as_array().unwrap().clone();
    assert_eq!(rows[29]["value"]["value"], "1073741855/33285996544");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_queries_round_trip(c in -50i64..50, d in 1i64..20, at in -9i64..9, w in 1i64..9) {
        let f = format!("{c}/{d}*x + 1");
        let alpha = format!("x^2 + {w}*heaviside(c=1/2, at={at}/10)");
        let o = stj(&["--format", "json", "compare", &f, &alpha, "--on=-1,1"]);
        prop_assert_eq!(code(&o), 0);
        let mut ls = Vec::new();
        leaves(&json_lines(&o)[0], &mut ls);
        for s in ls {
            if let Ok(r) = parse_rational(&s) {
                prop_assert_eq!(r.to_string(), s);
            }
        }
    }
}
