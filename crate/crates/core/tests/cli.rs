use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run_in(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetaforge"))
        .args(args)
        .env("ZETAFORGE_CACHE", cache)
        .output()
        .unwrap()
}

fn run(args: &[&str]) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), args);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--output", "json"]);
    let (code, out) = run(&a);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn count_examples() {
    let p1 = data("p1.json");
    let fat = data("fat_point.json");
    assert_eq!(run(&["count", "--variety", &p1, "--kind", "weil", "--p", "3", "--m", "1", "--n", "1"]), (0, "4\n".into()));
    assert_eq!(run(&["count", "--variety", &fat, "--kind", "igusa", "--p", "3", "--n", "1"]), (0, "3\n".into()));
    assert_eq!(run(&["count", "--variety", &fat, "--kind", "serre", "--p", "3", "--n", "1"]), (0, "1\n".into()));
    assert_eq!(run(&["count", "--variety", &p1, "--kind", "weil", "--q", "4", "--n", "1"]), (0, "5\n".into()));
    let v = json(&["count", "--variety", &fat, "--kind", "serre", "--p", "3", "--n", "1"]);
    assert_eq!(v["value"], "1");
    assert_eq!(v["meta"], "m=4");
}

#[test]
fn series_reports() {
    let z = json(&["zeta", "--variety", &data("p1.json"), "--p", "2"]);
    assert_eq!(z["found"], true);
    assert_eq!(z["ratfn"]["numer"], serde_json::json!(["1"]));
    assert_eq!(z["ratfn"]["denom"], serde_json::json!(["1", "-3", "2"]));
    assert_eq!(z["shape"], serde_json::json!([{"a": "0", "b": "1"}, {"a": "1", "b": "1"}]));

    let q = json(&["igusa", "--variety", &data("fat_point.json"), "--p", "3"]);
    assert_eq!(q["ratfn"]["numer"], serde_json::json!(["1", "3"]));
    assert_eq!(q["ratfn"]["denom"], serde_json::json!(["1", "0", "-3"]));
    assert_eq!(q["shape"], serde_json::json!([{"a": "1", "b": "2"}]));

    let (code, text) = run(&["serre", "--variety", &data("fat_point.json"), "--p", "3"]);
    assert_eq!(code, 0);
    assert!(text.contains("rational: (1) / (1 - T)\n"), "{text}");
    assert!(text.contains("shape: {(0,1)}\n"), "{text}");
    assert!(text.contains("series:\n0\t1/1\n1\t1/1\n"), "{text}");
}

#[test]
fn json_round_trips_text() {
    let args = ["igusa", "--variety", &data("fat_point.json"), "--p", "2", "--order", "8"];
    let v = json(&args);
    let (_, text) = run(&args);
    for (i, c) in v["counts"].as_array().unwrap().iter().enumerate() {
        let line = format!("{}\t{}\t{}\n", c["n"].as_str().unwrap(), c["value"].as_str().unwrap(), c["meta"].as_str().unwrap());
        assert!(text.contains(&line), "count {i}");
    }
    for (i, c) in v["series"].as_array().unwrap().iter().enumerate() {
        assert!(text.contains(&format!("{i}\t{}\n", c.as_str().unwrap())));
    }
    assert!(text.contains(&format!("guard: {}\n", v["guard"].as_str().unwrap())));
    assert!(text.contains(&format!("rational: {}\n", v["ratfn"]["text"].as_str().unwrap())));
}

#[test]
fn kapranov_reports() {
    let v = json(&["kapranov", "--variety", &data("p1.json"), "--q", "3"]);
    assert_eq!(v["curve_shape"]["genus"], "0");
    assert_eq!(v["functional_equation"]["holds"], true);

    let e = json(&[
        "kapranov", "--variety", &data("elliptic.json"), "--q", "5", "--order", "5", "--max-order", "2", "--min-guard", "1",
    ]);
    assert_eq!(e["curve_shape"]["genus"], "1");
    assert_eq!(e["functional_equation"]["holds"], true);
    assert_eq!(e["symmetric_products"][1], "9");

    let (code, text) = run(&["kapranov", "--variety", &data("two_points.json"), "--q", "3"]);
    assert_eq!(code, 2);
    assert!(text.contains("rational: (1) / (1 - 2*T + T^2)"), "{text}");
    assert!(text.contains("curve shape: mismatch"), "{text}");
}

#[test]
fn groth_reports() {
    let cover = data("cube_cover.json");
    let (code, text) = run(&["groth", "--cover", &cover, "--spec", "count:7", "--spec", "euler", "--spec", "hodge"]);
    assert_eq!(code, 0);
    assert!(text.contains("result: (L - 1)/3\n"));
    assert!(text.contains("count:7: 2\n"));
    assert!(text.contains("euler: 0\n"));
    assert!(text.contains("hodge: (u*v - 1)/3\n"));
    assert!(text.contains("euler integrality: passed\n"));

    let v = json(&["groth", "--expr", "'Y'*L - 1", "--spec", "count:2", "--count-value", "Y=5"]);
    assert_eq!(v["specializations"][0]["value"], "9");
    let (code, _) = run(&["groth", "--expr", "'Y'", "--spec", "euler"]);
    assert_eq!(code, 4);
}

#[test]
fn exit_codes() {
    let fat = data("fat_point.json");
    // liftable count of the fat point needs level 2n + 2, past the ceiling at n = 11
    let (code, _) = run(&["count", "--variety", &fat, "--kind", "serre", "--p", "3", "--n", "11"]);
    assert_eq!(code, 3);
    let (code, _) = run(&["--budget", "10", "count", "--variety", &data("elliptic.json"), "--kind", "weil", "--p", "5", "--n", "2"]);
    assert_eq!(code, 3);
    let (code, _) = run(&["count", "--variety", &fat, "--kind", "igusa", "--p", "4", "--n", "1"]);
    assert_eq!(code, 4);
    let (code, _) = run(&["count", "--variety", "/nonexistent.json", "--kind", "igusa", "--p", "3", "--n", "1"]);
    assert_eq!(code, 4);
    let (code, _) = run(&["count", "--variety", &data("p1.json"), "--kind", "igusa", "--p", "3", "--n", "1"]);
    assert_eq!(code, 4);
    let (code, _) = run(&["zeta", "--variety", &fat, "--q", "6"]);
    assert_eq!(code, 4);
    let (code, _) = run(&["frobnicate"]);
    assert_eq!(code, 4);
}

#[test]
fn cache_is_used_and_workers_do_not_matter() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["zeta", "--variety", &data("p1.json"), "--p", "3", "--order", "6"];
    let cold = run_in(dir.path(), &[&["--workers", "1"], args.as_slice()].concat());
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let warm = run_in(dir.path(), &[&["--workers", "7"], args.as_slice()].concat());
    assert_eq!(cold.stdout, warm.stdout);
    assert!(cold.status.success() && warm.status.success());
}
