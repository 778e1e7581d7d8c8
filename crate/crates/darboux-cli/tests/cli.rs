use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn darboux(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_darboux")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

#[test]
fn same_seed_same_bytes() {
    let runs: [&[&str]; 4] = [
        &["translate", "--demo", "--seed", "7", "--samples", "4"],
        &["catalog", "--figure", "nontrivial-g0", "--grid", "1,7/4,2,3"],
        &["catalog", "--cpn-check", "--n", "3", "--samples", "500", "--seed", "3"],
        &["transport", "--fixture", "single-chart", "--d", "1/16"],
    ];
    for args in runs {
        let (a, b) = (darboux(args), darboux(args));
        assert_eq!(code(&a), 0, "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let other = darboux(&["translate", "--demo", "--seed", "8", "--samples", "4"]);
    assert_ne!(other.stdout, darboux(runs[0]).stdout);
}

#[test]
fn sequential_flag_changes_nothing() {
    let args = ["transport", "--fixture", "single-chart", "--d", "1/16"];
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(darboux(&args).stdout, darboux(&seq).stdout);
}

#[test]
fn cover_gap_is_delta() {
    let o = darboux(&["cover", "--n", "1", "--k", "3", "--check", "gap"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["min_gap"], "1/2");
    assert_eq!(v["pass"], true);
}

#[test]
fn matrix_is_printed_as_strings() {
    let v = json(&darboux(&["cover", "--n", "1", "--k", "4"]));
    assert_eq!(v["matrix"]["entries"], serde_json::json!([["4", "2"], ["0", "1"]]));
}

#[test]
fn catalog_lookups() {
    let v = json(&darboux(&["catalog", "--family", "cpn", "--n", "4"]));
    assert_eq!(v["SB"], "5");
    let v = json(&darboux(&["catalog", "--family", "grassmannian", "--k", "2", "--n", "5"]));
    assert_eq!(v["SB"], "{7,8,9,10}");
}

#[test]
fn figure_csv() {
    let o = darboux(&["catalog", "--figure", "trivial-g0", "--grid", "1,3/2,2,3"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["ratio,sb_min,sb_max,exact_flag", "1,3,5,false", "3/2,4,5,false", "2,5,5,true", "3,7,7,true"]);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&darboux(&["frobnicate"])), 2);
    assert_eq!(code(&darboux(&["cover", "--n", "1", "--k", "2"])), 2);
    assert_eq!(code(&darboux(&["displace", "--d", "two"])), 2);
    assert_eq!(code(&darboux(&["invariants", "--descriptor", "/nonexistent.json"])), 2);
}

#[test]
fn failed_checks_exit_1() {
    let o = darboux(&["displace", "--shear", "zero"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["report"]["displaced"], false);
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn undersized_target_is_a_capacity_error() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = r#"{"name":"tight","k":3,"eps":"1/10",
        "charts":[{"region":[{"lo":["0","0"],"hi":["1","1"]}],"core":null,"parent":null,"gate":null,"scale":"1/32","nu":null}],
        "ball_center":["1/2","1/2"],
        "target":{"kind":"zones","zones":[{"lo":["0","0"],"hi":["1/2","1/2"]}]},
        "retry_bound":4,"disjoint_cores":[]}"#;
    let path = write(dir.path(), "tight.json", scenario);
    let o = darboux(&["transport", "--scenario", &path]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("capacity"));
}

#[test]
fn recorded_run_replays() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run.json");
    let svg = dir.path().join("svg");
    let o = darboux(&[
        "transport",
        "--fixture",
        "single-chart",
        "--d",
        "1/24",
        "--svg",
        svg.to_str().unwrap(),
        "--out",
        run.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    for j in 1..=3 {
        let text = fs::read_to_string(svg.join(format!("colour-{j}.svg"))).unwrap();
        assert!(text.starts_with("<svg"));
    }
    let o = darboux(&["transport", "--replay", run.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["valid"], true);

    // moving one cube by a sliver breaks the replay
    let mut rec: Value = serde_json::from_str(&fs::read_to_string(&run).unwrap()).unwrap();
    let t = &mut rec["plans"][0]["moves"][0]["translation"][0];
    *t = Value::String("1/7".into());
    let bad = write(dir.path(), "bad.json", &rec.to_string());
    let o = darboux(&["transport", "--replay", &bad]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["valid"], false);
}

#[test]
fn descriptor_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&darboux(&["catalog", "--family", "trivial", "--g", "0", "--a", "3", "--b", "1"]));
    let path = write(dir.path(), "d.json", &v["descriptor"].to_string());
    let o = darboux(&["invariants", "--descriptor", &path]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["SB"]["lo"], 7);
}
