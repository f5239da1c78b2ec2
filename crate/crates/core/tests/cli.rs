//! The command-line front end, driven in-process.

use std::path::PathBuf;

use minmat::cli;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("minmat").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("minmat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn min_fano_reports_four_orbit_classes() {
    let (code, out, _) = run(&["min", "fano"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("22 minimal matroids in 4 orbit classes"), "{out}");
}

#[test]
fn m_zero_of_pappus_is_empty() {
    let (code, out, _) = run(&["m-zero", "pappus"]);
    assert_eq!((code, out.as_str()), (0, "∅\n"));
    let (_, out, _) = run(&["m-zero", "fano"]);
    assert_eq!(out, "{1,2,3,4,5,6,7}\n");
}

#[test]
fn xval_table_for_the_seven_point_family() {
    let file = data("xsystem_seven.json");
    let (code, out, _) = run(&["xval", "--file", &file, "--set", "all"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("# val([7]) = 3"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 128);
    assert_eq!(rows[127], "127,3");
    let (_, out, _) = run(&["vx", "--file", &file, "--set", "1,2,3,4,5,6,7"]);
    assert_eq!(out, "v({1,2,3,4,5,6,7}) = 2\n");
    let (_, out, _) = run(&["min-x", "--file", &file]);
    assert!(out.starts_with("1 minimal rank-3 X-matroids\n  rank 2; lines {1,2,3,4,5,6,7}"), "{out}");
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    for args in [["min", "maclane"], ["decompose", "k9"], ["min-a", "qs"]] {
        let a = scratch(&format!("{}-{}-a.json", args[0], args[1]));
        let b = scratch(&format!("{}-{}-b.json", args[0], args[1]));
        assert_eq!(run(&[args[0], args[1], "--json", a.to_str().unwrap()]).0, 0);
        assert_eq!(run(&[args[0], args[1], "--json", b.to_str().unwrap()]).0, 0);
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{args:?}");
    }
}

#[test]
fn decompose_json_carries_citations() {
    let path = scratch("fano-decompose.json");
    assert_eq!(run(&["decompose", "fano", "--json", path.to_str().unwrap()]).0, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["count"], 22);
    assert_eq!(v["complete"], true);
    assert!(v["citations"].as_array().unwrap().iter().any(|c| c.as_str().unwrap().contains("not realizable")));
    let (_, out, _) = run(&["decompose", "fano", "--facts", "none"]);
    assert!(out.starts_with("23 components"), "{out}");
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["min", "no-such-configuration"]);
    assert_eq!(code, 1);
    assert_eq!(err.lines().count(), 1, "{err}");

    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"d": 5, "lines": [[1,2,3],[1,2,4]]}"#).unwrap();
    let (code, _, err) = run(&["min", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("share two or more points"), "{err}");

    std::fs::write(&bad, r#"{"d": 5, "lines": [[1,2,"three"]]}"#).unwrap();
    let (code, _, err) = run(&["aut", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("parse error"), "{err}");

    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, 1);
    assert_eq!(err.lines().count(), 1, "{err}");

    let (code, out, err) = run(&["decompose", "pappus", "--depth", "1"]);
    assert_eq!(code, 2);
    assert!(out.contains("INCOMPLETE"));
    assert!(err.contains("depth limit 1"), "{err}");

    let (code, _, err) = run(&["oracle-check", "maclane"]);
    assert_eq!(code, 2);
    assert!(err.contains("budget"), "{err}");

    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn library_and_automorphisms() {
    let (_, out, _) = run(&["library"]);
    assert_eq!(out.lines().count(), 7);
    for name in minmat::library::names() {
        assert!(out.contains(name));
    }
    let (_, out, _) = run(&["aut", "fano"]);
    assert!(out.starts_with("order 168\n"));
    let (_, out, _) = run(&["aut", "qs"]);
    assert!(out.starts_with("order 24\n"));
}

#[test]
fn oracle_check_agrees_on_small_configurations() {
    let (code, out, _) = run(&["oracle-check", "qs"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("agree"), "{out}");
    let (code, out, _) = run(&["oracle-check", "--max-d", "5"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().all(|l| l.ends_with(" 0 mismatches")), "{out}");
}
