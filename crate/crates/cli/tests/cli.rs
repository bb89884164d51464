use std::io::{BufRead, BufReader};
use std::process::{Command, Output, Stdio};

use ag43_core::caps::canonical_cap;
use ag43_core::render::parse_ascii;
use serde_json::Value;

fn ag43(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ag43")).args(args).output().expect("run ag43")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = ag43(&[args, &["--json"]].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let o = ag43(&["verify-all"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 16);
    assert!(!text.contains("FAIL"));

    let strip = |v: Value| -> Vec<(String, String, bool)> {
        v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| (c["name"].as_str().unwrap().into(), c["actual"].as_str().unwrap().into(), c["pass"].as_bool().unwrap()))
            .collect()
    };
    let a = json(&["verify-all", "--seed", "9"]);
    assert_eq!(a["overall"], true);
    assert_eq!(strip(a), strip(json(&["verify-all", "--seed", "9"])));
}

#[test]
fn cap_census_and_analysis() {
    assert_eq!(stdout(&ag43(&["caps", "enumerate", "--count"])).trim(), "8424");
    let a = json(&["caps", "analyze", "--points", "canonical"]);
    assert_eq!(a["anchor"], 0);
    assert_eq!(a["is_maximal_cap"], true);
}

#[test]
fn demicap_commands() {
    let v = json(&["demicaps", "list", "--cap", "canonical"]);
    assert_eq!(v["demicaps"].as_array().unwrap().len(), 72);
    let v = json(&["demicaps", "list", "--cap", "canonical", "--decompositions"]);
    let decs = v.as_array().unwrap();
    assert_eq!(decs.len(), 36);
    let (a, b) = (&decs[0]["half_a"], &decs[0]["half_b"]);
    let join = |x: &Value| x.as_array().unwrap().iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",");
    let c = json(&["demicaps", "correspond", "--half-a", &join(a), "--half-b", &join(b)]);
    assert_eq!(c["image_cap"], decs[0]["image_cap"]);
    let v = json(&["demicaps", "extend", "--through", "27,9,3,1"]);
    assert_eq!(v["demicaps"].as_array().unwrap().len(), 8);
    let o = ag43(&["demicaps", "extend", "--through", "27,9,3,36"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn partition_commands() {
    let v = json(&["partitions", "classify", "--cap", "canonical"]);
    assert_eq!(v["counts"], serde_json::json!({"1": 36, "2": 90, "6": 72}));
    let v = json(&["partitions", "grid36", "--cap", "canonical"]);
    assert_eq!(v["caps"].as_array().unwrap().len(), 6);
    let o = ag43(&["partitions", "unique", "--cap", "canonical"]);
    assert!(stdout(&o).contains("TwoOneCompletable"));
}

#[test]
fn symmetry_commands() {
    let v = json(&["symmetry", "stabilizer", "--cap", "canonical"]);
    assert_eq!(v["order"], 2880);
    assert_eq!(v["contains_neg_identity"], true);
    let v = json(&["symmetry", "grid-action", "--cap", "canonical"]);
    assert_eq!((v["non_swapping"].as_u64(), v["swapping"].as_u64()), (Some(720), Some(720)));
    assert_eq!(v["row_action_order"], 720);
}

#[test]
fn render_round_trip_and_svg_file() {
    let text = stdout(&ag43(&["render", "--points", "canonical"]));
    assert_eq!(parse_ascii(&text).unwrap(), canonical_cap().points());
    let empty = stdout(&ag43(&["render", "--points", ""]));
    assert!(parse_ascii(&empty).unwrap().is_empty());

    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    for p in [&p1, &p2] {
        let o = ag43(&["render", "--points", "canonical", "--format", "svg", "--output", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let (a, b) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert_eq!(a, b);
    assert!(a.starts_with(b"<svg"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ag43(&["caps", "analyze", "--points", "5,5"]).status.code(), Some(2));
    assert_eq!(ag43(&["partitions", "classify", "--cap", "1,2,3"]).status.code(), Some(2));
    assert_eq!(ag43(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn serve_on_assigned_port_and_busy_port() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ag43"))
        .args(["serve", "--port", "0"])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap()).read_line(&mut line).unwrap();
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(line.starts_with("listening on http://127.0.0.1:"), "{line}");
    let port: u16 = line.trim().rsplit(':').next().unwrap().parse().unwrap();
    assert_ne!(port, 0);

    let busy = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = busy.local_addr().unwrap().port().to_string();
    let o = ag43(&["serve", "--port", &port]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("binding port"));
}
