use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn instance(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(name)
}

fn bggreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bggreg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn betti_s_on_the_triangle() {
    let path = instance("triangle.ideal");
    let out = bggreg(&["--json", "betti-s", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["command"], "betti-s");
    assert_eq!(v["result"]["reg"], 1);
    let coarse = v["result"]["coarse"].as_array().unwrap();
    let mult = |i: i64, j: i64| {
        coarse
            .iter()
            .find(|e| e["i"] == i && e["j"] == j)
            .map(|e| e["mult"].as_u64().unwrap())
    };
    assert_eq!(mult(0, 0), Some(1));
    assert_eq!(mult(-1, 2), Some(3));
    assert_eq!(mult(-2, 3), Some(2));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn projective_plane_depends_on_characteristic() {
    let path = instance("rp2_6.ideal");
    let p = path.to_str().unwrap();
    let q = json_of(&bggreg(&["--json", "reg", p]));
    let two = json_of(&bggreg(&["--json", "--field-char", "2", "reg", p]));
    assert_eq!(q["result"]["reg"], 2);
    assert_eq!(two["result"]["reg"], 3);
}

#[test]
fn lpd_of_small_quotients() {
    let edge = instance("d3_edge.ideal");
    let out = bggreg(&["lpd", edge.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("lpd = 1\n"));
    let two = instance("two_edges.ideal");
    let v = json_of(&bggreg(&["--json", "lpd", two.to_str().unwrap()]));
    assert_eq!(v["result"]["lpd"], 2);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(bggreg(&["no-such-command"]).status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("bggreg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.ideal");
    std::fs::write(&bad, "d 2\ngen 1 1\n").unwrap();
    let out = bggreg(&["--json", "betti-e", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(v["command"], "betti-e");
    assert!(v["error"]["kind"].is_string());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn failing_check_exits_1() {
    // two disjoint edges are not weakly Koszul, so no filtration exists
    let two = instance("two_edges.ideal");
    assert_eq!(bggreg(&["filtration", two.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn verify_and_random_replay() {
    let a = bggreg(&["--json", "verify", "d2", "--d", "3", "--count", "10", "--seed", "4"]);
    assert_eq!(a.status.code(), Some(0));
    let b = bggreg(&["--json", "verify", "d2", "--d", "3", "--count", "10", "--seed", "4"]);
    let strip = |v: &mut Value| {
        v["result"].as_object_mut().unwrap().remove("wall_time");
    };
    let (mut va, mut vb) = (json_of(&a), json_of(&b));
    strip(&mut va);
    strip(&mut vb);
    assert_eq!(va, vb);
    let r1 = bggreg(&["random", "--d", "4", "--count", "5", "--seed", "9"]);
    let r2 = bggreg(&["random", "--d", "4", "--count", "5", "--seed", "9"]);
    assert_eq!(r1.stdout, r2.stdout);
}
