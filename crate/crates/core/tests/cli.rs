use std::path::PathBuf;
use std::process::{Command, Output};

fn write_graph(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("coprimality-cli-it-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coprimality"))
        .args(args)
        .output()
        .unwrap()
}

fn json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).unwrap()
}

#[test]
fn poly_triangle() {
    let k3 = write_graph("k3.txt", "3\n1 2\n2 3\n1 3\n");
    let v = json(&run(&["poly", "--graph", k3.to_str().unwrap()]));
    assert_eq!(
        v,
        serde_json::json!({"signed": true, "coefficients": ["1", "0", "-3", "2"]})
    );

    let v = json(&run(&["poly", "--graph", k3.to_str().unwrap(), "--plus"]));
    assert_eq!(v["coefficients"], serde_json::json!(["1", "0", "3", "4"]));
    assert_eq!(v["signed"], false);
}

#[test]
fn count_both_methods() {
    let k2 = write_graph("k2.txt", "# one edge\n2\n1 2\n");
    let v = json(&run(&[
        "count",
        "--graph",
        k2.to_str().unwrap(),
        "--x",
        "10",
        "--method",
        "both",
    ]));
    assert_eq!(v["count"], "63");
    assert_eq!(v["methods_agree"], true);

    for method in ["bruteforce", "moebius"] {
        let v = json(&run(&[
            "count",
            "--graph",
            k2.to_str().unwrap(),
            "--x",
            "100",
            "--method",
            method,
        ]));
        assert_eq!(v["count"], "6087");
        assert_eq!(v["method"], method);
        assert!(v.get("methods_agree").is_none());
    }
}

#[test]
fn density_of_edgeless_graph() {
    let empty = write_graph("empty2.txt", "2\n");
    let out = run(&[
        "density",
        "--graph",
        empty.to_str().unwrap(),
        "--prime-bound",
        "100",
    ]);
    let v = json(&out);
    assert_eq!(v["value"].as_f64(), Some(1.0));
    assert_eq!(v["tail_bound"].as_f64(), Some(0.0));
    assert_eq!(v["prime_bound"], 100);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.starts_with("{\"value\":1.0000000000000000,\"prime_bound\":100,\"tail_bound\":0.0,")
    );
}

#[test]
fn density_of_single_edge() {
    let k2 = write_graph("k2d.txt", "2\n1 2\n");
    let v = json(&run(&[
        "density",
        "--graph",
        k2.to_str().unwrap(),
        "--prime-bound",
        "1000",
    ]));
    assert_eq!(v["tail_bound"].as_f64(), Some(0.002));
    let value = v["value"].as_f64().unwrap();
    let zeta = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    assert!(value >= zeta && value - zeta <= 0.002);
}

#[test]
fn density_below_tail_threshold_is_domain_error() {
    let k3 = write_graph("k3t.txt", "3\n1 2\n2 3\n1 3\n");
    let out = run(&[
        "density",
        "--graph",
        k3.to_str().unwrap(),
        "--prime-bound",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("threshold"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--graph", "g.txt"]).status.code(), Some(2));
    assert_eq!(
        run(&["count", "--graph", "g.txt", "--x", "3", "--method", "magic"])
            .status
            .code(),
        Some(2)
    );
    let bad = write_graph("dup.txt", "3\n1 2\n2 1\n");
    let out = run(&["count", "--graph", bad.to_str().unwrap(), "--x", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate edge"));
}

#[test]
fn f_subcommand() {
    let k2 = write_graph("k2f.txt", "2\n1 2\n");
    let v = json(&run(&["f", "--graph", k2.to_str().unwrap(), "--m", "4"]));
    assert_eq!(v["value"], "-1");
    assert_eq!(v["path"], "both");
    let v = json(&run(&["f", "--graph", k2.to_str().unwrap(), "--m", "30"]));
    assert_eq!(v["value"], "0");
}

#[test]
fn verify_with_single_x() {
    let out = run(&[
        "verify",
        "--max-x",
        "1",
        "--max-vertices",
        "3",
        "--prime-bound",
        "1000",
    ]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let suites = report["suites"].as_array().unwrap();
    let oracle = suites
        .iter()
        .find(|s| s["name"] == "oracle_equivalence")
        .unwrap();
    assert_eq!(oracle["cases"], 8);
    assert_eq!(oracle["status"], "PASS");
    for name in [
        "prime_power_coefficients",
        "multiplicativity",
        "coefficient_invariants",
        "single_edge_density",
    ] {
        let suite = suites.iter().find(|s| s["name"] == name).unwrap();
        assert_eq!(suite["status"], "PASS", "{name}");
    }
    // The process status mirrors the report.
    assert_eq!(out.status.success(), report["status"] == "PASS");
}
