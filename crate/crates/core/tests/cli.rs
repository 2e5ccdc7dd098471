use std::ffi::OsString;
use std::fs;
use std::path::Path;

use lagflow::cli::dispatch;
use lagflow::io::{to_json, FlowRunReport};

fn run(dir: &Path, config: &str, args: &[&str]) -> i32 {
    let cfg = dir.join("config.json");
    fs::write(&cfg, config).unwrap();
    let mut argv: Vec<OsString> = vec!["lagflow".into()];
    argv.extend(args.iter().map(OsString::from));
    argv.extend(["--config".into(), cfg.into_os_string(), "--out".into(), dir.join("out").into_os_string()]);
    dispatch(argv)
}

const ZERO_STEPS: &str = r#"{
  "dimension": 2,
  "polynomial": { "roots": [[-1, 0], [1, 0]] },
  "initial_curve": { "type": "sine", "amplitude": 0.2 },
  "numerics": { "tau_max": 0 },
  "output": { "snapshot_every": 1 }
}"#;

#[test]
fn zero_step_flow_writes_one_row_and_no_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), ZERO_STEPS, &["flow"]), 0);
    let out = dir.path().join("out");
    let csv = fs::read_to_string(out.join("timeseries.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2, "{csv}");
    let snaps = fs::read_dir(&out).unwrap().filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with("snap_")).count();
    assert_eq!(snaps, 0);
    assert!(out.join("final_curve_0.json").exists());
}

#[test]
fn report_round_trips_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ZERO_STEPS.replace("\"tau_max\": 0", "\"tau_max\": 1e-4");
    assert_eq!(run(dir.path(), &cfg, &["flow"]), 0);
    let text = fs::read_to_string(dir.path().join("out/report.json")).unwrap();
    let parsed: FlowRunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(to_json(&parsed), text);
}

#[test]
fn unknown_field_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = r#"{"dimension": 2, "polynomial": {"roots": [[-1,0],[1,0]]}, "colour": 1}"#;
    assert_eq!(run(dir.path(), bad, &["stability"]), 4);
    assert_eq!(run(dir.path(), r#"{"dimension": 1, "polynomial": {"roots": [[-1,0],[1,0]]}}"#, &["flow"]), 4);
}

#[test]
fn missing_config_file_is_a_config_error() {
    let argv: Vec<OsString> = ["lagflow", "flow", "--config", "/nonexistent/lagflow.json"].iter().map(OsString::from).collect();
    assert_eq!(dispatch(argv), 4);
}

#[test]
fn stability_and_decompose_on_the_split_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{
      "dimension": 2,
      "polynomial": { "roots": [[-1, 0], [0, 0.2], [1, 0]] },
      "initial_curve": { "type": "arc", "from": 0, "to": 2, "bulge": 0.5 }
    }"#;
    assert_eq!(run(dir.path(), cfg, &["stability"]), 0);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/stability.json")).unwrap()).unwrap();
    assert_eq!(report["close_ok"], false);
    assert_eq!(run(dir.path(), cfg, &["decompose"]), 0);
    let d: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/decompose.json")).unwrap()).unwrap();
    assert_eq!(d["pieces"].as_array().unwrap().len(), 2);
}

#[test]
fn sweep_fans_out_into_directories() {
    let dir = tempfile::tempdir().unwrap();
    let code = run(dir.path(), ZERO_STEPS, &["flow", "--sweep", "numerics.c_safety=0.2,0.3"]);
    assert_eq!(code, 0);
    for v in ["0.2", "0.3"] {
        assert!(dir.path().join(format!("out/numerics.c_safety={v}/report.json")).exists());
    }
}

#[test]
fn slag_and_localmodel_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{
      "dimension": 3,
      "polynomial": { "roots": [[-1, 0], [0.3, 0.8], [1, -0.2]] },
      "slag": { "root": 0, "target": 2, "window": [0.2, 0.7], "atlas_grid": 4 },
      "localmodel": { "c": [1], "samples": 50 }
    }"#;
    assert_eq!(run(dir.path(), cfg, &["slag", "connect"]), 0);
    assert_eq!(run(dir.path(), cfg, &["slag", "shoot"]), 0);
    assert_eq!(run(dir.path(), cfg, &["localmodel"]), 0);
    for f in ["connector.json", "atlas.json", "atlas.svg", "shoot.json", "shoot.svg", "localmodel.json", "localmodel.svg"] {
        assert!(dir.path().join("out").join(f).exists(), "{f}");
    }
}
