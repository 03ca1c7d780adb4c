use std::fs;
use std::process::{Command, Output};

use dqpt::harness::ExperimentConfig;
use serde_json::Value;

fn dqpt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqpt")).args(args).output().unwrap()
}

#[test]
fn s_curve_mode_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let res = dqpt(&["s-curve", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,s,lower,upper"));
    assert_eq!(lines.next(), Some("0,0,0,0"));
    assert_eq!(csv.lines().count(), 1001);
    assert!(!csv.contains('\r'));

    let meta: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("s.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["mode"], "s-curve");
    assert_eq!(meta["config_fingerprint"].as_str().unwrap().len(), 64);
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"mode": "entropy-bound", "j": 20, "h": 0.2, "beta": 2.0, "t_max": 3}"#).unwrap();
    let out = dir.path().join("bound.csv");
    let res = dqpt(&["entropy-bound", "--config", cfg.to_str().unwrap(), "--h", "0.8", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));

    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("t,angle,sigma_lower\n"));
    assert_eq!(csv.lines().count(), 1 + 61);

    let meta: Value = serde_json::from_str(&fs::read_to_string(format!("{}.meta.json", out.display())).unwrap()).unwrap();
    let config: ExperimentConfig = serde_json::from_value(meta["config"].clone()).unwrap();
    assert_eq!((config.h, config.beta, config.dt), (Some(0.8), Some(2.0), Some(0.05)));
    // the sidecar parses back into the config that produced it
    assert_eq!(config.clone().resolve().unwrap(), config);
    assert!(meta["summary"]["time_average"].as_f64().unwrap() > 0.0);
}

#[test]
fn invalid_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    for args in [
        vec!["echo", "--j", "10"],
        vec!["echo", "--j", "10", "--h", "0.5", "--dt", "-0.1"],
        vec!["sweep", "--j", "0.3"],
        vec!["bures", "--config", "/nonexistent/config.json"],
    ] {
        let mut full = args.clone();
        full.extend(["--out", out.to_str().unwrap()]);
        let res = dqpt(&full);
        assert_eq!(res.status.code(), Some(2), "{args:?}");
        let stderr = String::from_utf8(res.stderr).unwrap();
        assert_eq!(stderr.trim_end().lines().count(), 1);
        let diag: Value = serde_json::from_str(stderr.trim_end()).unwrap();
        assert_eq!(diag["error"], "config");
        assert!(!out.exists());
    }
}

#[test]
fn unknown_config_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"mode": "echo", "j": 5, "h": 0.8, "temperature": 3}"#).unwrap();
    let res = dqpt(&["echo", "--config", cfg.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn echo_mode_reports_cusps() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("echo.csv");
    let res = dqpt(&["echo", "--j", "100", "--h", "0.8", "--t-max", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("t,echo,rate,active_sector\n0,1,0,1\n"));
    let meta: Value = serde_json::from_str(&fs::read_to_string(format!("{}.meta.json", out.display())).unwrap()).unwrap();
    assert!(!meta["summary"]["critical_times"].as_array().unwrap().is_empty());
}

#[test]
fn sweep_output_is_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let run = |workers: &str| {
        let out = dir.path().join(format!("sweep{workers}.csv"));
        let res = dqpt(&[
            "sweep", "--j", "15", "--h-grid", "0:1:6", "--T", "40", "--workers", workers,
            "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(res.status.code(), Some(0));
        let meta: Value =
            serde_json::from_str(&fs::read_to_string(format!("{}.meta.json", out.display())).unwrap()).unwrap();
        (fs::read(&out).unwrap(), meta)
    };
    let (csv1, meta1) = run("1");
    let (csv3, meta3) = run("3");
    assert_eq!(csv1, csv3);
    assert_eq!(meta1["config_fingerprint"], meta3["config_fingerprint"]);
    assert_eq!(meta1["config"]["worker_count"], 1);
    assert_eq!(meta3["config"]["worker_count"], 3);
    let text = String::from_utf8(csv1).unwrap();
    assert!(text.starts_with("h,j,beta,value,quantity\n0,15,,"));
    assert_eq!(text.lines().count(), 7);
}
