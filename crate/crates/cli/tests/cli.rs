use std::path::Path;
use std::process::{Command, Output};

fn gamow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gamow")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn stderr_reason(o: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&o.stderr);
    assert_eq!(text.trim_end().lines().count(), 1, "{text}");
    serde_json::from_str(text.trim()).unwrap()
}

fn rows(path: &str) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn front_rows_lie_on_the_ellipse() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "f.json", r#"{"masses":[1,1],"energy":{"re":1},"tau_R":1,"count":9}"#);
    let out = dir.path().join("f.csv");
    let o = gamow(&["front", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("sample_id,r_1,r_2,tau,residual\n"));
    let rows = rows(out.to_str().unwrap());
    assert_eq!(rows.len(), 9);
    for row in rows {
        assert!((row[1] * row[1] + row[2] * row[2] - 2.0).abs() <= 1e-10);
        assert!((row[3] - 1.0).abs() <= 1e-12);
        assert!(row[4] <= 1e-10);
    }
}

#[test]
fn poles_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = gamow(&["poles", "--g", "20", "--a", "1", "--m", "1", "--branches", "1:3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("branch,k_re,k_im,E0,Gamma,residual\n"));
    let rows = rows(out.to_str().unwrap());
    assert_eq!(rows.len(), 3);
    for (j, row) in rows.iter().enumerate() {
        assert_eq!(row[0], (j + 1) as f64);
        assert!(row[2] < 0.0);
        assert!(row[4] > 0.0);
        assert!(row[5] <= 1e-12);
    }
}

#[test]
fn norm_scan_of_shell_state_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "n.json",
        r#"{"masses":[1],"tau_grid":[3.0,4.5,6.0],"state":{"kind":"shell","g":20,"a":1,"branch":1}}"#,
    );
    let out = dir.path().join("n.csv");
    let o = gamow(&["norm", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("tau_R,vol_re,vol_im,surf_re,surf_im,norm_re,norm_im\n"));
    let rows = rows(out.to_str().unwrap());
    for row in &rows {
        assert!((row[5] - rows[0][5]).abs() <= 1e-8 * rows[0][5].abs());
        assert!((row[6] - rows[0][6]).abs() <= 1e-8 * rows[0][5].abs());
    }
}

#[test]
fn tau_record() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "t.json", r#"{"masses":[1,1],"energy":{"re":1},"r":[1,1]}"#);
    let o = gamow(&["tau", "--config", &cfg]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let get = |k: &str| v[k]["re"].as_f64().unwrap();
    assert!((get("tau") - 1.0).abs() < 1e-14);
    assert!((get("S") - 2.0).abs() < 1e-14);
    assert!((get("T") - 0.5f64.sqrt()).abs() < 1e-14);
    assert!((get("weight") - 2.0 * 2f64.sqrt()).abs() < 1e-13);
    assert_eq!(v["p_s"].as_array().unwrap().len(), 2);
}

#[test]
fn validate_fast_succeeds() {
    let o = gamow(&["validate", "--suite", "fast"]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let out = out.to_str().unwrap();
    let unknown = write(dir.path(), "u.json", r#"{"masses":[1],"energy":{"re":1},"r":[1],"colour":"red"}"#);
    let broken = write(dir.path(), "b.json", "{not json");
    let growing = write(dir.path(), "g.json", r#"{"masses":[1],"energy":{"re":1,"im":0.2},"r":[1]}"#);
    let complex_front = write(dir.path(), "c.json", r#"{"masses":[1],"energy":{"re":1,"im":-0.2},"tau_R":1}"#);
    let cases: [Vec<&str>; 7] = [
        vec!["tau", "--config", &unknown],
        vec!["tau", "--config", &broken],
        vec!["tau", "--config", &growing],
        vec!["tau", "--config", "/nonexistent/config.json"],
        vec!["front", "--config", &complex_front, "--out", out],
        vec!["poles", "--g", "20", "--a", "1", "--m", "1", "--branches", "3:1", "--out", out],
        vec!["frobnicate"],
    ];
    for args in cases {
        let o = gamow(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr_reason(&o)["error"], "config");
    }
}

#[test]
fn nonconvergence_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    // A vanishingly weak shell has no decaying pole near the seed.
    let o = gamow(&["poles", "--g", "0.001", "--a", "1", "--m", "1", "--branches", "1:1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_reason(&o)["error"], "nonconvergence");
}
