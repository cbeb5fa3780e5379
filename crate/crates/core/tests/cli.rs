use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use shecke::braid::parse;
use shecke::cli::{builtin_catalog, parse_catalog, Cache};

fn shecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shecke"))
        .args(args)
        .env_remove("SHECKE_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = shecke(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("shecke-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    let _ = fs::remove_file(&p);
    p
}

#[test]
fn invariant_examples() {
    assert_eq!(
        stdout(&["--no-cache", "invariant", "trefoil"]),
        "2*t^2 + -1*t^4 + 1*t^2*x^2\n"
    );
    assert_eq!(stdout(&["--no-cache", "invariant", "unknot"]), "1\n");
    assert_eq!(
        stdout(&["--no-cache", "invariant", "t1", "--form", "resolution"]),
        "X: 1 ; Y: 1*t^-1*x^-1 + -1*t*x^-1\n"
    );
    assert_eq!(
        stdout(&["--no-cache", "invariant", "s1 s1 s1"]),
        stdout(&["--no-cache", "invariant", "trefoil"])
    );
}

#[test]
fn json_output_shape() {
    let text = stdout(&["--no-cache", "invariant", "t1 s1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["word"], "t1 s1");
    assert_eq!(v["n"], 2);
    assert_eq!(v["d"], 1);
    assert_eq!(v["form"], "canonical");
    assert_eq!(v["terms"][1]["Y"], 1);
    assert_eq!(v["terms"][1]["coeff"], "1");
}

#[test]
fn basis_values_have_d_plus_one_lines() {
    let text = stdout(&["--no-cache", "invariant", "t1 t2", "--basis"]);
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("I[0] = "));
}

#[test]
fn trace_and_normalform_examples() {
    assert_eq!(
        stdout(&["trace", "t1", "--d", "1"]),
        "T[0] = 1\nT[1] = 1*z\n"
    );
    assert_eq!(
        stdout(&["normalform", "s1 s1"]),
        "(-1 + 1*q) * s1 + 1*q * 1\n"
    );
    let out = shecke(&["trace", "t1", "--d", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn error_exit_codes() {
    let out = shecke(&["--no-cache", "invariant", "s1 q2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown generator"));
    assert_eq!(shecke(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(shecke(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn table_over_a_catalog_file() {
    let path = scratch("five.tsv");
    fs::write(
        &path,
        "# five links\nunknot\t1\t\t1\t1\nunlink2\t2\tn=2\t2\nhopf+\t2\ts1 s1\t2\n\
         trefoil\t2\ts1^3\t1\t2*t^2 + -1*t^4 + 1*t^2*x^2\nsingular-trefoil\t2\tt1 s1 s1\t1\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let text = stdout(&["--no-cache", "table", p]);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[3].starts_with("trefoil\t2\t0\t1\t2*t^2"));
    assert!(rows[4].starts_with("singular-trefoil\t2\t1\t1\tX: "));
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["--no-cache", "table", p, "--json"])).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 5);
}

#[test]
fn malformed_catalog_reports_line() {
    let path = scratch("bad.tsv");
    fs::write(&path, "unknot\t1\t\t1\nbroken\t2\ts1 s1\n").unwrap();
    let out = shecke(&["--no-cache", "table", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert!(parse_catalog("x\t2\ts1\t2\n").is_err());
}

#[test]
fn wrong_expected_value_fails_table() {
    let path = scratch("wrong.tsv");
    fs::write(&path, "trefoil\t2\ts1^3\t1\t1\n").unwrap();
    assert_eq!(
        shecke(&["--no-cache", "table", path.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn builtin_catalog_round_trips_and_matches() {
    for e in builtin_catalog() {
        assert_eq!(
            parse(&e.word.format(), Some(e.word.strands())).unwrap(),
            e.word
        );
    }
    assert!(shecke(&["--no-cache", "table"]).status.success());
}

#[test]
fn cached_and_uncached_runs_agree() {
    let cache = scratch("cache.tsv");
    let c = cache.to_str().unwrap();
    let plain = stdout(&["--no-cache", "table"]);
    let cold = stdout(&["--cache-file", c, "table"]);
    let warm = stdout(&["--cache-file", c, "table"]);
    assert_eq!(plain, cold);
    assert_eq!(plain, warm);
    let lines = fs::read_to_string(&cache).unwrap();
    assert_eq!(lines.lines().count(), builtin_catalog().len());
    assert!(lines
        .lines()
        .all(|l| l.split('\t').next().unwrap().len() == 64));

    let env_cache = scratch("env-cache.tsv");
    let out = Command::new(env!("CARGO_BIN_EXE_shecke"))
        .args(["invariant", "figure8"])
        .env("SHECKE_CACHE", &env_cache)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(&env_cache).unwrap().lines().count(), 1);
}

#[test]
fn cache_entries_are_served() {
    let cache = scratch("planted.tsv");
    let request = "invariant\tcanonical\t2\tfalse\tfalse\ts1^3";
    fs::write(&cache, format!("{}\tplanted\n", Cache::key(request))).unwrap();
    let c = cache.to_str().unwrap();
    assert_eq!(
        stdout(&["--cache-file", c, "invariant", "trefoil"]),
        "planted\n"
    );
    assert_eq!(
        stdout(&["--no-cache", "invariant", "trefoil"]),
        "2*t^2 + -1*t^4 + 1*t^2*x^2\n"
    );
}

#[test]
fn job_count_does_not_change_output() {
    let one = stdout(&["--no-cache", "--jobs", "1", "table"]);
    for jobs in ["2", "4", "7"] {
        assert_eq!(stdout(&["--no-cache", "--jobs", jobs, "table"]), one);
    }
    let a = stdout(&[
        "--no-cache",
        "--jobs",
        "1",
        "invariant",
        "t1 t2 s1 t1",
        "--form",
        "raw",
    ]);
    let b = stdout(&[
        "--no-cache",
        "--jobs",
        "3",
        "invariant",
        "t1 t2 s1 t1",
        "--form",
        "raw",
    ]);
    assert_eq!(a, b);
}

#[test]
fn verify_suites_from_the_command_line() {
    let text = stdout(&["verify", "independence", "--d", "3"]);
    assert!(text.contains("[6, 2*q, 2*q^2, 6*q^3]"));
    let text = stdout(&[
        "verify", "markov", "--d", "2", "--trials", "100", "--seed", "7",
    ]);
    assert!(text.ends_with("markov: 100/100 passed\n"));
    let text = stdout(&["verify", "lemmas", "--n", "4", "--trials", "20"]);
    assert_eq!(
        text.lines()
            .filter(|l| l.starts_with("VerifiedExactly"))
            .count(),
        4
    );
    assert!(!text.contains("Failed"));
}
