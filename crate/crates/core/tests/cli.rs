use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qcut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcut"))
        .args(args)
        .env_remove("QCUT_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn gen_ghz3(dir: &Path) -> String {
    let path = dir.join("ghz3.qc");
    let out = qcut(&["gen", "--kind", "ghz", "--n", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    path.to_str().unwrap().to_string()
}

#[test]
fn ghz_run_with_two_qubit_devices() {
    let dir = tempfile::tempdir().unwrap();
    let c = gen_ghz3(dir.path());
    let out = qcut(&["run", &c, "--wmax", "2", "--smax", "1", "--hss", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    let top = r["top_states"].as_array().unwrap();
    assert_eq!(top[0]["state"], "000");
    assert_eq!(top[1]["state"], "111");
    for t in &top[..2] {
        assert!((t["value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    }
    assert_eq!(r["plan"]["m"], 2);
    assert_eq!(r["plan"]["num_cuts"], 1);
    assert_eq!(r["cost"]["schema"], 1);
    assert!(r["metrics"]["p_hss"].as_f64().unwrap() > 1.0 - 1e-8);
    assert_eq!(r["input_digest"].as_str().unwrap().len(), 64);

    let full = qcut(&["run", &c, "--wmax", "2", "--smax", "1"]);
    assert_eq!(json(&full)["verification"]["passed"], true);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("s.qc");
    let c = c.to_str().unwrap();
    assert!(qcut(&["gen", "--kind", "supremacy", "--n", "9", "--seed", "4", "--out", c]).status.success());
    let args = ["run", c, "--wmax", "5", "--smax", "6", "--hss", "32", "--seed", "9", "--shots", "5000"];
    let a = qcut(&args);
    let b = qcut(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn single_qubit_devices_are_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let c = gen_ghz3(dir.path());
    let out = qcut(&["cut", &c, "--wmax", "1", "--smax", "4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_and_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qcut(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qcut(&["gen", "--kind", "nope", "--n", "3"]).status.code(), Some(1));
    let c = gen_ghz3(dir.path());
    assert_eq!(qcut(&["cut", &c]).status.code(), Some(1));
    let bad = dir.path().join("bad.qc");
    fs::write(&bad, "qubits 2\ncx 0 0\n").unwrap();
    assert_eq!(
        qcut(&["cut", bad.to_str().unwrap(), "--wmax", "2", "--smax", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(qcut(&["gen", "--kind", "regular", "--n", "5"]).status.code(), Some(5));
}

#[test]
fn estimate_on_uncut_circuit_has_no_classical_time() {
    let dir = tempfile::tempdir().unwrap();
    let c = gen_ghz3(dir.path());
    let out = qcut(&["estimate", &c, "--wmax", "3", "--smax", "2"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["t_classical"].as_f64(), Some(0.0));
    assert_eq!(r["t_total"], r["t_qpu"]);
    assert_eq!(r["schema"], 1);
}

#[test]
fn cut_plan_feeds_verify_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("w.qc");
    let c = c.to_str().unwrap();
    assert!(qcut(&["gen", "--kind", "wstate", "--n", "6", "--out", c]).status.success());
    let plan = dir.path().join("plan.json");
    let dot = dir.path().join("dag.dot");
    let variants = dir.path().join("variants");
    let out = qcut(&[
        "cut",
        c,
        "--wmax",
        "4",
        "--smax",
        "6",
        "--out",
        plan.to_str().unwrap(),
        "--emit-dot",
        dot.to_str().unwrap(),
        "--emit-variants",
        variants.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let p: Value = serde_json::from_str(&fs::read_to_string(&plan).unwrap()).unwrap();
    assert_eq!(p["config"]["w_max"], 4);
    for part in p["partitions"].as_array().unwrap() {
        assert!(part["w"].as_u64().unwrap() <= 4);
        assert!(part["s"].as_u64().unwrap() <= 6);
    }
    assert!(fs::read_to_string(&dot).unwrap().starts_with("digraph"));
    let expected: u64 = p["partitions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| 3u64.pow(s["u"].as_u64().unwrap() as u32) * 4u64.pow(s["d"].as_u64().unwrap() as u32))
        .sum();
    assert_eq!(fs::read_dir(&variants).unwrap().count() as u64, expected);

    let v = qcut(&["verify", c, "--plan", plan.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stderr));
    assert_eq!(json(&v)["passed"], true);

    let tensors = dir.path().join("tensors");
    let r = qcut(&["run", c, "--plan", plan.to_str().unwrap(), "--dump-tensors", tensors.to_str().unwrap()]);
    assert!(r.status.success());
    let m = p["m"].as_u64().unwrap() as usize;
    for j in 0..m {
        let bytes = fs::read(tensors.join(format!("sub{j}.qctn"))).unwrap();
        let t = qcut::tensor::io::read_tensor(&mut bytes.as_slice()).unwrap();
        assert_eq!(t.labels.last(), Some(&qcut::tensor::AxisLabel::Out(j)));
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("q.qc");
    let c = c.to_str().unwrap();
    assert!(qcut(&["gen", "--kind", "erdos", "--n", "8", "--seed", "2", "--out", c]).status.success());
    let one = qcut(&["--threads", "1", "run", c, "--wmax", "5", "--smax", "12"]);
    let four = Command::new(env!("CARGO_BIN_EXE_qcut"))
        .args(["run", c, "--wmax", "5", "--smax", "12"])
        .env("QCUT_THREADS", "4")
        .output()
        .unwrap();
    assert!(one.status.success() && four.status.success());
    let (a, b) = (json(&one), json(&four));
    assert_eq!(a["verification"]["passed"], true);
    for (x, y) in a["top_states"].as_array().unwrap().iter().zip(b["top_states"].as_array().unwrap()) {
        assert!((x["value"].as_f64().unwrap() - y["value"].as_f64().unwrap()).abs() < 1e-10);
    }
}

#[test]
fn pretty_output_is_text() {
    let dir = tempfile::tempdir().unwrap();
    let c = gen_ghz3(dir.path());
    let out = qcut(&["--pretty", "cut", &c, "--wmax", "2", "--smax", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("subcircuits: 2  cuts: 1"));
}
