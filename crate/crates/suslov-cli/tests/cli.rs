use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};
use suslov::meromorphic::fixture;
use suslov::model::{inertia_from_p, SignBranch};

fn suslov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_suslov")).args(args).output().expect("binary runs")
}

fn suslov_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_suslov"))
        .args(args)
        .env("SUSLOV_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn csv_rows(bytes: &[u8]) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_reader(bytes);
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn angle_odd_p_is_pi() {
    let v = json(&suslov(&["angle", "--p", "1", "--d", "0.5"]));
    assert_eq!(v["delta_psi_rad"].as_f64().unwrap(), std::f64::consts::PI);
    assert_eq!(v["method"], "Formula");
}

#[test]
fn angle_numeric_matches_formula() {
    let v = json(&suslov(&["angle", "--p", "2", "--d", "1", "--numeric", "--T", "25"]));
    let f = suslov::scattering::delta_psi_formula(2.0, 1.0);
    assert!((v["delta_psi_rad"].as_f64().unwrap() - f).abs() < 1e-4);
    assert!(v["residual"].as_f64().is_some());
    let bad = suslov(&["angle", "--p", "2", "--d", "1", "--numeric", "--tol", "1e-4"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn galois_verdicts() {
    let v = json(&suslov(&["galois", "--p", "2"]));
    assert_eq!(v["verdict"], "NotLiouvillian_EvenP");
    assert_eq!(v["log_flags"], serde_json::json!([true, true, false, false]));
    assert_eq!(v["degree_bound"]["candidates"], serde_json::json!([-2, -4, -6]));
    assert_eq!(v["singular_points"].as_array().unwrap().len(), 6);
    assert_eq!(v["singular_points"][1]["logarithmic"], true);
    let v = json(&suslov(&["galois", "--p", "3"]));
    assert_eq!(v["verdict"], "Solvable_OddP");
    let v = json(&suslov(&["galois", "--p", "12"]));
    assert_eq!(v["verdict"], "Unknown");
    assert_eq!(suslov(&["galois", "--p", "2.5"]).status.code(), Some(2));
    assert_eq!(suslov(&["galois", "--p", "0"]).status.code(), Some(2));
}

#[test]
fn solutions_gram_identity() {
    for (p, which) in [("3", "generated"), ("1", "generated"), ("3", "fixture"), ("1", "fixture")] {
        let v = json(&suslov(&["solutions", "--p", p, "--d", "0.5", "--gram", "--which", which]));
        assert!(v["max_deviation"].as_f64().unwrap() < 1e-10, "p={p} {which}");
    }
    assert_eq!(suslov(&["solutions", "--p", "2", "--d", "0.5"]).status.code(), Some(2));
}

#[test]
fn solutions_csv_generated_matches_fixture() {
    let a = suslov(&["solutions", "--p", "3", "--d", "0.5", "--samples", "20"]);
    let b = suslov(&["solutions", "--p", "3", "--d", "0.5", "--samples", "20", "--which", "fixture"]);
    let (h, ra) = csv_rows(&a.stdout);
    let (_, rb) = csv_rows(&b.stdout);
    assert_eq!(h.len(), 10);
    assert_eq!(ra.len(), 21);
    for (x, y) in ra.iter().zip(&rb) {
        for k in 0..10 {
            assert!((x[k] - y[k]).abs() < 1e-10);
        }
    }
}

#[test]
fn classify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let id = write(dir.path(), "id.json", r#"{"I11":1,"I22":1,"I33":1,"I13":0,"I23":0}"#);
    let v = json(&suslov(&["classify", "--tensor", &id]));
    assert_eq!(v["case"], "DegenerateAxis");

    let t = inertia_from_p(3.0, 2.0, 1.0, 1.6, SignBranch::Minus).unwrap().tensor;
    let tp = write(dir.path(), "p3.json", &serde_json::to_string(&t).unwrap());
    let v = json(&suslov(&["classify", "--tensor", &tp]));
    assert_eq!(v["case"], "Case1_I13zero");
    assert!((v["p_value"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    assert_eq!(v["p_parity"], "Odd");

    let bad = write(dir.path(), "bad.json", "{ I11: 1");
    let o = suslov(&["classify", "--tensor", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed"));

    let neg = write(dir.path(), "neg.json", r#"{"I11":-1,"I22":1,"I33":1,"I13":0,"I23":0}"#);
    assert_eq!(suslov(&["classify", "--tensor", &neg]).status.code(), Some(2));
}

#[test]
fn simulate_fixture_oracle() {
    let d = 0.5;
    let o = suslov(&["simulate", "--p", "1", "--d", "0.5", "--fixture-row", "2", "--t1", "10", "--samples", "50"]);
    assert!(o.status.success());
    let (h, rows) = csv_rows(&o.stdout);
    assert_eq!(h, ["t", "omega1", "omega2", "gamma1", "gamma2", "gamma3", "F1", "F2"]);
    for r in &rows {
        let g = fixture(1.0, d, r[0]).unwrap()[2];
        for k in 0..3 {
            assert!((r[3 + k] - g[k]).abs() < 1e-8, "t={}", r[0]);
        }
        assert!((r[7] - rows[0][7]).abs() < 1e-8);
    }
}

#[test]
fn simulate_backward_and_f3() {
    let o = suslov(&["simulate", "--p", "3", "--d", "0.5", "--t0", "0", "--t1", "-20", "--samples", "40", "--f3"]);
    let (h, rows) = csv_rows(&o.stdout);
    assert_eq!(h.last().unwrap(), "F3");
    assert!(rows.windows(2).all(|w| w[1][0] < w[0][0]));
    assert_eq!(rows.last().unwrap()[0], -20.0);
    for r in &rows {
        assert!((r[8] - rows[0][8]).abs() < 1e-8);
        assert!((r[6] - rows[0][6]).abs() < 1e-8);
    }
}

#[test]
fn simulate_tensor_and_exclusivity() {
    let dir = tempfile::tempdir().unwrap();
    let t = inertia_from_p(2.0, 2.0, 1.0, 1.6, SignBranch::Minus).unwrap().tensor;
    let tp = write(dir.path(), "t.json", &serde_json::to_string(&t).unwrap());
    let o = suslov(&["simulate", "--tensor", &tp, "--t1", "5", "--samples", "10"]);
    let (_, rows) = csv_rows(&o.stdout);
    assert_eq!(rows.len(), 11);
    let both = suslov(&["simulate", "--tensor", &tp, "--p", "1", "--d", "1"]);
    assert_eq!(both.status.code(), Some(2));
    let none = suslov(&["simulate"]);
    assert_eq!(none.status.code(), Some(2));
}

#[test]
fn numerical_failure_exit_code() {
    let o = suslov(&["simulate", "--p", "1", "--d", "0.5", "--x0", "1e200,1e200,0,0,1"]);
    assert_eq!(o.status.code(), Some(3));
    let o = suslov(&["simulate", "--p", "1", "--d", "0.5", "--rel-tol", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn integrals_table() {
    let v = json(&suslov(&["integrals", "--p", "5", "--d", "0.75", "--verify"]));
    assert_eq!(v["pde_residual_zero"], true);
    assert_eq!(v["p1"].as_array().unwrap().len(), 6);
    let v = json(&suslov(&["integrals", "--p", "1", "--d", "0.5"]));
    // F3 = ω1γ1 + ω2γ2/(d²+1) − d ω2γ3/(d²+1)
    assert_eq!(v["p1"], serde_json::json!([0.0, 1.0]));
    assert!((v["p2"][0].as_f64().unwrap() - 0.8).abs() < 1e-15);
    assert!((v["p3"][0].as_f64().unwrap() + 0.4).abs() < 1e-15);
    assert_eq!(suslov(&["integrals", "--p", "4", "--d", "0.5"]).status.code(), Some(2));
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"command": "angle", "p": 2.0, "d": 1.0}"#);
    let v = json(&suslov(&["angle", "--config", &cfg]));
    assert!((v["delta_psi_rad"].as_f64().unwrap() - suslov::scattering::delta_psi_formula(2.0, 1.0)).abs() < 1e-15);
    let v = json(&suslov(&["angle", "--config", &cfg, "--p", "1"]));
    assert_eq!(v["delta_psi_rad"].as_f64().unwrap(), std::f64::consts::PI);
    assert_eq!(suslov(&["galois", "--config", &cfg]).status.code(), Some(2));
    let unknown = write(dir.path(), "u.json", r#"{"bogus": 1}"#);
    assert_eq!(suslov(&["angle", "--config", &unknown]).status.code(), Some(2));
    let out = dir.path().join("sim.csv");
    let sim = write(
        dir.path(),
        "s.json",
        &format!(r#"{{"p": 1.0, "d": 0.5, "t1": 2.0, "samples": 4, "output": "{}"}}"#, out.display()),
    );
    assert!(suslov(&["simulate", "--config", &sim]).status.success());
    let (_, rows) = csv_rows(&std::fs::read(&out).unwrap());
    assert_eq!(rows.len(), 5);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for f in [&a, &b] {
        let o = suslov(&["simulate", "--p", "2", "--d", "0.7", "--t1", "-8", "--output", f.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn sweep_order_independent_of_threads() {
    let args = ["sweep", "--p", "2,1,0.5,3", "--d", "1,0.5", "--numeric"];
    let one = suslov_env(&args, "1");
    let four = suslov_env(&args, "4");
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    let (h, rows) = csv_rows_mixed(&one.stdout);
    assert_eq!(h[0], "p");
    let order: Vec<(f64, f64)> = rows.iter().map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap())).collect();
    let expect: Vec<(f64, f64)> =
        [2.0, 1.0, 0.5, 3.0].iter().flat_map(|&p| [1.0, 0.5].map(|d| (p, d))).collect();
    assert_eq!(order, expect);
    for r in &rows {
        assert_eq!(r[5], "ok");
        assert!(r[4].parse::<f64>().unwrap() < 1e-4);
    }
    assert_eq!(suslov_env(&args, "zero").status.code(), Some(2));
}

#[test]
fn sweep_galois() {
    let o = suslov_env(&["sweep", "--kind", "galois", "--p", "2,3,4"], "2");
    let (_, rows) = csv_rows_mixed(&o.stdout);
    let verdicts: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(verdicts, ["NotLiouvillian_EvenP", "Solvable_OddP", "NotLiouvillian_EvenP"]);
}

fn csv_rows_mixed(bytes: &[u8]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(bytes);
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}
