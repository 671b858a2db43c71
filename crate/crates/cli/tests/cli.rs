use std::path::Path;
use std::process::{Command, Output};

use crackwave::frontsynth::{measure_speed, FrontField};
use crackwave::kernels::{make_synthetic, BranchTerm, KernelTable, SyntheticParams};
use crackwave::output::{grid_from_csv, split_csv, SWEEP_COLUMNS};
use tempfile::TempDir;

fn crackwave(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crackwave"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_config(dir: &Path, json: &str) -> String {
    let path = dir.join("run.json");
    std::fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

const ENGINEERED: &str = r#"{
  "kernel": {"kind": "synthetic", "corrugation_root": {"re": [0.4, 0.6], "im": [-0.1, 0.1]}},
  "region": {"re": [0.0, 2.0], "im": [-1.0, 0.25], "nx": 41, "ny": 26},
  "sweep": {"speeds": [0.3, 0.45, 0.6, 0.75]},
  "output": {"directory": "out"}
}"#;

fn prescribed(x: f64) -> (f64, f64) {
    (0.4 + 0.6 * x, -0.1 + 0.1 * x)
}

fn data_rows(text: &str) -> usize {
    split_csv(text).unwrap().2.len()
}

#[test]
fn invalid_poisson_ratio_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let out = crackwave(dir.path(), &["coeffs", "--nu", "0.6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nu"), "{}", stderr(&out));
}

#[test]
fn supersonic_speed_is_a_domain_error() {
    let dir = TempDir::new().unwrap();
    let out = crackwave(dir.path(), &["coeffs", "--v-over-b", "1.2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn coeffs_reports_rayleigh_speed() {
    let dir = TempDir::new().unwrap();
    let out = crackwave(dir.path(), &["coeffs", "--nu", "0.3", "--v-over-b", "0.69"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let (_, _, rows) = split_csv(&text).unwrap();
    let c_r: f64 = rows.iter().find(|(_, r)| r[0] == "c_R_over_b").unwrap().1[1]
        .parse()
        .unwrap();
    assert!((c_r - 0.9274).abs() < 1e-3, "{c_r}");
}

#[test]
fn unknown_config_field_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), r#"{"material": {"nu": 0.3, "poisson": 0.2}}"#);
    let out = crackwave(dir.path(), &["-c", &cfg, "coeffs"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("poisson"));
}

#[test]
fn flags_override_the_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"material": {"nu": 0.25}, "output": {"format": "json"}}"#,
    );
    let out = crackwave(dir.path(), &["-c", &cfg, "coeffs", "--nu", "0.3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["nu"], 0.3);
    assert_eq!(doc["config"]["material"]["nu"], 0.3);
}

#[test]
fn grid_has_one_row_per_node_and_reruns_identically() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), ENGINEERED);
    let args = ["-c", cfg.as_str(), "grid", "--region", "0,2,-1,0.25,11,11"];
    let first = crackwave(dir.path(), &args);
    assert!(first.status.success(), "{}", stderr(&first));
    let text = std::fs::read_to_string(dir.path().join("out/grid.csv")).unwrap();
    assert_eq!(data_rows(&text), 121);
    let (grid, meta) = grid_from_csv(&text).unwrap();
    assert_eq!((grid.region.nx, grid.region.ny), (11, 11));
    let echo: serde_json::Value = serde_json::from_str(&meta["config"]).unwrap();
    assert_eq!(echo["region"]["nx"], 11);

    let serial = Command::new(env!("CARGO_BIN_EXE_crackwave"))
        .current_dir(dir.path())
        .env("CRACKWAVE_THREADS", "1")
        .args(args)
        .output()
        .unwrap();
    assert!(serial.status.success());
    assert_eq!(
        std::fs::read_to_string(dir.path().join("out/grid.csv")).unwrap(),
        text
    );
}

#[test]
fn tabulated_kernel_on_complex_region_is_a_capability_error() {
    let dir = TempDir::new().unwrap();
    let source = make_synthetic(SyntheticParams::uniform(BranchTerm::new(1.0, 0.2, 0.8))).unwrap();
    KernelTable::sample(&source, 64, 0.3, 0.69)
        .unwrap()
        .write(dir.path().join("kernel.txt"))
        .unwrap();
    let out = crackwave(
        dir.path(),
        &[
            "grid",
            "--table",
            "kernel.txt",
            "--region",
            "0,2,-1,0.25,5,5",
        ],
    );
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
    assert!(stderr(&out).contains("capability"));
}

#[test]
fn missing_table_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let out = crackwave(dir.path(), &["grid", "--table", "absent.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reference_kernel_is_unavailable() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), r#"{"kernel": {"kind": "reference"}}"#);
    let out = crackwave(dir.path(), &["-c", &cfg, "grid"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn empty_sweep_writes_header_only() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), r#"{"output": {"directory": "out"}}"#);
    let out = crackwave(dir.path(), &["-c", &cfg, "sweep"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("out/sweep.csv")).unwrap();
    let (meta, header, rows) = split_csv(&text).unwrap();
    assert_eq!(header, SWEEP_COLUMNS);
    assert!(rows.is_empty());
    assert!(meta.contains_key("config"));
}

#[test]
fn engineered_sweep_matches_prescribed_curve() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), ENGINEERED);
    let out = crackwave(dir.path(), &["-c", &cfg, "sweep"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("out/sweep.csv")).unwrap();
    let (_, _, rows) = split_csv(&text).unwrap();
    assert_eq!(rows.len(), 4);
    for (_, row) in rows {
        let x: f64 = row[0].parse().unwrap();
        let (re, im) = prescribed(x);
        assert_eq!(row[3], "true");
        assert!((row[1].parse::<f64>().unwrap() - re).abs() < 1e-8);
        assert!((row[2].parse::<f64>().unwrap() - im).abs() < 1e-8);
    }
}

#[test]
fn vc_echoes_v_lo_when_the_root_always_qualifies() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), ENGINEERED);
    let out = crackwave(
        dir.path(),
        &["-c", &cfg, "vc", "--v-lo", "0.35", "--v-hi", "0.8"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/vc.json")).unwrap())
            .unwrap();
    assert_eq!(doc["V_c_over_b"], 0.35);
}

#[test]
fn vc_above_rayleigh_speed_is_a_domain_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), ENGINEERED);
    let out = crackwave(
        dir.path(),
        &["-c", &cfg, "vc", "--v-lo", "0.3", "--v-hi", "0.95"],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn front_snapshots_travel_at_the_root_speed() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{
          "kernel": {"kind": "synthetic", "corrugation_root": {"re": [0.83], "im": [0.0]}},
          "region": {"re": [0.0, 2.0], "im": [-1.0, 0.25], "nx": 41, "ny": 26},
          "front": {"samples": 128, "times": [0.0, 0.25, 0.5, 0.75, 1.0]},
          "output": {"directory": "out"}
        }"#,
    );
    let out = crackwave(dir.path(), &["-c", &cfg, "front"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let mut field = FrontField {
        x: vec![],
        times: vec![],
        values: vec![],
    };
    for i in 0..5 {
        let text = std::fs::read_to_string(dir.path().join(format!("out/front_t{i}.csv"))).unwrap();
        let (meta, header, rows) = split_csv(&text).unwrap();
        assert_eq!(header, "x2,phi");
        assert_eq!(rows.len(), 128);
        field.times.push(meta["t"].parse().unwrap());
        field.x = rows.iter().map(|(_, r)| r[0].parse().unwrap()).collect();
        field
            .values
            .push(rows.iter().map(|(_, r)| r[1].parse().unwrap()).collect());
    }
    let dx = field.x[1] - field.x[0];
    let speed = measure_speed(&field).unwrap();
    assert!((speed - 0.83).abs() <= dx / 0.25, "speed {speed}");
}

#[test]
fn bad_thread_count_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_crackwave"))
        .current_dir(dir.path())
        .env("CRACKWAVE_THREADS", "zero")
        .arg("coeffs")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
