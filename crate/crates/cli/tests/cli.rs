use std::process::{Command, Output};

use serde_json::Value;

fn zeno(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeno-discord"))
        .args(args)
        .env_remove("ZENO_DISCORD_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn gamma_table_shape_and_boundary_row() {
    let out = zeno(&["gamma"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["tau", "gamma", "dgamma", "survival_u2"]);
    assert_eq!(rows.len(), 501);
    assert_eq!(rows[0], ["0", "0", "1", "1"]);
    assert_eq!(text.matches("tau,").count(), 1);
    for row in &rows {
        let v: Vec<f64> = row.iter().map(|x| x.parse().unwrap()).collect();
        assert!((v[3] - (-v[1] * v[0]).exp()).abs() < 1e-8 * v[3].max(1.0));
    }
}

#[test]
fn gamma_derivative_changes_sign_at_crossover() {
    let out = zeno(&["gamma", "--eta", "0.75", "--tau-min", "1.73", "--tau-max", "1.74", "--tau-steps", "2"]);
    let (_, rows) = csv_rows(&stdout(&out));
    let d: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(d[0] > 0.0 && d[1] < 0.0);
}

#[test]
fn crossover_records() {
    let (_, rows) = csv_rows(&stdout(&zeno(&["crossover", "--eta", "1"])));
    assert_eq!(rows[0][0], "unbiased");
    assert_eq!(rows[0][2].parse::<f64>().unwrap(), 1.0);

    let out = zeno(&["crossover", "--eta", "0.05"]);
    assert!(out.status.success());
    let (_, rows) = csv_rows(&stdout(&out));
    assert_eq!(rows[0], ["none", "", "", ""]);

    let (_, rows) = csv_rows(&stdout(&zeno(&["crossover", "--eta", "0.05", "--bias", "0.65"])));
    let tau: f64 = rows[0][2].parse().unwrap();
    let mu: f64 = rows[0][3].parse().unwrap();
    assert!((tau - 2.2395).abs() < 1e-3 && (mu - 2.24).abs() < 1e-2);
}

#[test]
fn sweep_initial_row_is_the_pure_state() {
    let out = zeno(&["sweep", "--preset", "fig1", "--tau-steps", "3"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(
        header,
        ["tau", "u1sq", "u2sq", "C_qq", "C_rr", "D_qq", "D_rr", "I_qq", "I_rr", "CC_qq", "CC_rr"]
    );
    let row: Vec<f64> = rows[0].iter().map(|x| x.parse().unwrap()).collect();
    assert_eq!(row[3], 0.8);
    assert!((row[5] - 0.721928).abs() < 1e-6);
    assert_eq!(row[4], 0.0);
    assert_eq!(row[6], 0.0);
}

#[test]
fn sweep_concurrence_dies_before_reservoir_peak() {
    let out = zeno(&[
        "sweep", "--amp", "0.447213595499958", "--delta", "1.4", "--bias", "0", "--tau-max", "10", "--tau-steps", "101",
    ]);
    let (header, rows) = csv_rows(&stdout(&out));
    let c_qq = header.iter().position(|h| h == "C_qq").unwrap();
    let c_rr = header.iter().position(|h| h == "C_rr").unwrap();
    let value = |r: &Vec<String>, i: usize| r[i].parse::<f64>().ok();
    let death = rows.iter().position(|r| value(r, c_qq) == Some(0.0));
    let peak = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| value(r, c_rr).map(|v| (i, v)))
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
    let d = death.expect("qubit concurrence reaches zero");
    assert!(d < peak.0, "death at row {d}, reservoir peak at row {}", peak.0);
}

#[test]
fn sweep_reports_negative_rates_as_indeterminate() {
    let out = zeno(&["sweep", "--tau-max", "6", "--tau-steps", "7"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header.last().unwrap(), "status");
    assert_eq!(rows[0].last().unwrap(), "determinate");
    assert_eq!(rows[6].last().unwrap(), "indeterminate");
    assert_eq!(rows[6][1], "");
}

#[test]
fn nh_sweep_layout() {
    let out = zeno(&["nh-sweep", "--r-steps", "3", "--t-steps", "4"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["r", "t", "P11", "P10", "D_qq", "D_rr", "status"]);
    assert_eq!(rows.len(), 12);
    for (i, row) in rows.iter().enumerate() {
        if i % 4 == 0 {
            assert_eq!(&row[1..4], ["0", "1", "0"]);
            assert_eq!(row[6], "determinate");
        }
        if row[6] == "indeterminate" {
            assert_eq!(row[4], "");
        }
    }
    let rs: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(rs.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn json_output_echoes_params() {
    let out = zeno(&["gamma", "--tau-steps", "5", "--format", "json", "--threads", "3"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["params"]["command"], "gamma");
    assert_eq!(doc["params"]["tau-steps"], 5);
    assert!(doc["params"].get("threads").is_none());
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let keys: Vec<&str> = rows[0].as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(keys, ["tau", "gamma", "dgamma", "survival_u2"]);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"command": "gamma", "tau-steps": 4, "tau-max": 3.0}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let (_, rows) = csv_rows(&stdout(&zeno(&["gamma", "--config", cfg])));
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3][0], "3");
    let (_, rows) = csv_rows(&stdout(&zeno(&["gamma", "--config", cfg, "--tau-steps", "2"])));
    assert_eq!(rows.len(), 2);
    assert_eq!(zeno(&["sweep", "--config", cfg]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(zeno(&["gamma", "--eta", "-1"]).status.code(), Some(2));
    assert_eq!(zeno(&["gamma", "--tau-steps", "1"]).status.code(), Some(2));
    assert_eq!(zeno(&["sweep", "--family", "chi"]).status.code(), Some(2));
    assert_eq!(zeno(&["sweep", "--preset", "fig9"]).status.code(), Some(2));
    assert_eq!(zeno(&["nh-sweep", "--t-max", "2"]).status.code(), Some(2));
    assert_eq!(zeno(&["frobnicate"]).status.code(), Some(2));
    let out = zeno(&["gamma", "--eta", "0.05", "--tau-max", "5", "--tau-steps", "2", "--bias", "0.3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn validate_suite() {
    let out = zeno(&["validate"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("eta_half_limit"));
    assert!(!text.contains(",fail"));

    let loose = zeno(&["validate", "--quad-tol", "1e-2"]);
    assert_eq!(loose.status.code(), Some(1));
    let text = stdout(&loose);
    assert!(text.contains("gamma_closed_vs_quadrature,"));
    assert!(text.contains(",fail"));
}

#[test]
fn thread_env_fallback_matches_flag() {
    let args = ["nh-sweep", "--r-steps", "5", "--t-steps", "5"];
    let with_flag = zeno(&[&args[..], &["--threads", "2"]].concat());
    let with_env = Command::new(env!("CARGO_BIN_EXE_zeno-discord"))
        .args(args)
        .env("ZENO_DISCORD_THREADS", "3")
        .output()
        .unwrap();
    assert!(with_env.status.success());
    assert_eq!(with_flag.stdout, with_env.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_zeno-discord"))
        .args(args)
        .env("ZENO_DISCORD_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
