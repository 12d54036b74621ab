use std::process::{Command, Output};

fn qcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcap"))
        .args(args)
        .env_remove("QCAP_GAP_TOL")
        .env_remove("QCAP_FEAS_TOL")
        .env_remove("QCAP_SEED")
        .output()
        .expect("qcap runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value_log(o: &Output) -> f64 {
    let s = stdout(o);
    let line = s.lines().find(|l| l.starts_with("value_log = ")).expect("value_log line");
    line["value_log = ".len()..].parse().unwrap()
}

#[test]
fn compute_known_values() {
    let o = qcap(&["compute", "--bound", "beta", "--channel", "ad:0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((value_log(&o) - (1.0 + 0.5f64.sqrt()).log2()).abs() < 1e-6);
    assert!(String::from_utf8_lossy(&o.stderr).contains("status Optimal"));

    let o = qcap(&["compute", "--bound", "beta", "--channel", "identity:3"]);
    assert!((value_log(&o) - 1.584963).abs() < 1e-6);

    let o = qcap(&["compute", "--bound", "m0nsppt", "--channel", "nalpha:0.7854"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value_linear = 2\n"));
}

#[test]
fn compute_formats() {
    let o = qcap(&["compute", "--bound", "c1", "--class", "nsppt", "--eps", "0.01", "--channel", "cq:0.9", "--format", "csv"]);
    let s = stdout(&o);
    assert!(s.starts_with("bound,channel,value_log,value_linear,status,gap\nc1_nsppt,cq:0.9,"));
    let o = qcap(&["compute", "--bound", "fnsppt", "--m", "2", "--channel", "ad:0.3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["name"], "f_nsppt");
    assert!(v["value_linear"].as_f64().unwrap() > 0.5);
}

#[test]
fn exit_codes() {
    assert_eq!(qcap(&["compute", "--bound", "nope", "--channel", "ad:0.5"]).status.code(), Some(1));
    assert_eq!(qcap(&["compute", "--bound", "beta", "--channel", "ad:2"]).status.code(), Some(1));
    assert_eq!(qcap(&["compute", "--bound", "beta", "--channel", "bogus"]).status.code(), Some(1));
    assert_eq!(qcap(&["compute", "--bound", "fns", "--channel", "ad:0.5"]).status.code(), Some(1));
    assert_eq!(qcap(&["frobnicate"]).status.code(), Some(1));
    let o = qcap(&["compute", "--bound", "beta", "--channel", "ad:0.5", "--max-iter", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic_across_jobs() {
    let dir = std::env::temp_dir().join(format!("qcap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    let args = |out: &str, jobs: &str| {
        vec![
            "sweep".to_string(),
            "--bound".into(),
            "c1nsppt,reppt".into(),
            "--channel".into(),
            "ad".into(),
            "--param".into(),
            "gamma:0:1:0.1".into(),
            "--eps".into(),
            "0.01".into(),
            "--jobs".into(),
            jobs.into(),
            "--out".into(),
            out.into(),
        ]
    };
    let run = |v: Vec<String>| qcap(&v.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(run(args(a.to_str().unwrap(), "1")).status.code(), Some(0));
    assert_eq!(run(args(b.to_str().unwrap(), "4")).status.code(), Some(0));
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    assert!(dir.join("a.plot.py").exists());

    let text = String::from_utf8(ta).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("param,bound,value_log,value_linear,status,gap"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 22);
    for pair in rows.chunks(2) {
        assert_eq!(pair[0][1], "c1nsppt");
        assert_eq!(pair[1][1], "reppt");
        let c1: f64 = pair[0][2].parse().unwrap();
        let re: f64 = pair[1][2].parse().unwrap();
        assert!(c1 <= re + 1e-7, "{c1} > {re}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_flags_failed_points() {
    let o = qcap(&["sweep", "--bound", "fns", "--channel", "ad", "--param", "gamma:0:1:0.5"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o).matches(",error,").count(), 3);
    let o = qcap(&["sweep", "--bound", "beta", "--channel", "ad", "--param", "gamma:1:0:0.5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn list_bounds() {
    let o = qcap(&["list-bounds"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for name in ["fns", "fnsppt", "c1ns", "c1nsppt", "re", "reppt", "fplus", "ftildeplus", "beta", "zeta", "m0ns", "m0nsppt", "ppv", "eacap", "adlower", "decay"] {
        assert!(s.lines().any(|l| l.split_whitespace().next() == Some(name)), "{name} missing");
    }
}

#[test]
fn selftest_subset_and_negative_control() {
    let o = qcap(&["selftest", "--criterion", "9", "--criterion", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let first = stdout(&o);
    assert!(first.contains("[PASS] 9") && first.contains("[PASS] 10"));
    assert_eq!(stdout(&qcap(&["selftest", "--criterion", "9", "--criterion", "10"])), first);

    let o = Command::new(env!("CARGO_BIN_EXE_qcap"))
        .args(["selftest", "--criterion", "9", "--criterion", "10"])
        .env("QCAP_GAP_TOL", "1e-2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("[FAIL] 9") && s.contains("[FAIL] 10"));
    assert_eq!(qcap(&["selftest", "--criterion", "99"]).status.code(), Some(1));
}
