use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use paramp_core::dynamics::fit_line;
use paramp_core::{CavityParams, PumpCavityParams, ThresholdReport};
use serde_json::Value;
use tempfile::TempDir;

const REFERENCE: &str = r#"{
  "cavity": {"mass_kg": 2e-6, "gap_m": 0.0299792458, "area_m2": 1e-2, "omega_rad_per_s": 62831853071.79586, "Q": 1e10},
  "pump": {"omega_rad_per_s": 62831853071.79586, "Q": 1e10},
  "drive": {"kind": "kinematic", "v_2w_m_per_s": 0.0}
}"#;

const REFERENCE_DC: &str = r#"{
  "cavity": {"mass_kg": 2e-6, "gap_m": 0.00749481145, "area_m2": 1e-2, "f_Hz": 1e10, "Q": 1e10},
  "pump": {"f_Hz": 2e10, "Q": 1e10},
  "drive": {"kind": "dc_bias", "E_dc_V_per_m": 1e6, "E_p_V_per_m": 1e3}
}"#;

fn desk(sim: &str) -> String {
    format!(
        r#"{{
  "cavity": {{"mass_kg": 1e-6, "gap_m": 1e-3, "area_m2": 1e-4, "f_Hz": 1e6, "Q": 1e3}},
  "pump": {{"f_Hz": 1e6, "Q": 1e3}},
  "drive": {{"kind": "kinematic", "v_2w_m_per_s": 0.0}},
  "sim": {sim}
}}"#
    )
}

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, contents).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn paramp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paramp"))
        .args(args)
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn value(v: &Value, key: &str) -> f64 {
    v[key]["value"].as_f64().unwrap()
}

fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(col).unwrap().parse().unwrap())
        .collect()
}

fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x.iter().zip(y).map(|(a, b)| (a.ln(), b.ln())).collect();
    fit_line(&pts).unwrap().slope
}

#[test]
fn threshold_golden_power() {
    let sb = Sandbox::new();
    let cfg = sb.file("reference.json", REFERENCE);
    let v = json_of(&paramp(&["threshold", "--config", s(&cfg)]));
    let p = value(&v, "P_threshold_no_bias");
    assert!((p / 3.57e-6 - 1.0).abs() < 5e-3, "{p}");
    assert_eq!(v["P_threshold_no_bias"]["unit"], "W");
    assert!(v.get("dc_bias").is_none());
}

#[test]
fn threshold_round_trips_library_values() {
    let sb = Sandbox::new();
    let cfg = sb.file("reference.json", REFERENCE);
    let out_path = sb.path("report.json");
    let out = paramp(&["threshold", "--config", s(&cfg), "--json-out", s(&out_path)]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();

    let omega = 62831853071.79586;
    let cav = CavityParams::new(2e-6, 0.0299792458, 1e-2, omega, 1e10).unwrap();
    let pump = PumpCavityParams::new(omega, 1e10).unwrap();
    let r = ThresholdReport::compute(&cav, &pump).unwrap();
    let expected = [
        ("kappa_at_threshold", r.kappa_at_threshold),
        ("gamma", r.gamma),
        ("tau", r.tau),
        ("v_threshold", r.v_threshold),
        ("K_threshold", r.k_threshold),
        ("U_threshold", r.u_threshold),
        ("P_threshold_no_bias", r.p_threshold_no_bias),
        ("braginsky_U", r.braginsky_u),
        ("walls_milburn_vc", r.walls_milburn_vc),
        ("rough_vc", r.rough_vc),
    ];
    for (key, want) in expected {
        assert_eq!(value(&v, key).to_bits(), want.to_bits(), "{key}");
        assert!(v[key]["unit"].is_string(), "{key} has no unit");
    }
}

#[test]
fn threshold_with_dc_bias_block() {
    let sb = Sandbox::new();
    let cfg = sb.file("dc.json", REFERENCE_DC);
    let v = json_of(&paramp(&["threshold", "--config", s(&cfg)]));
    let dc = &v["dc_bias"];
    assert!(dc["ratio"]["value"].as_f64().unwrap() > 1e10);
    assert_eq!(dc["P_threshold"]["unit"], "W");
    assert_eq!(dc["E_p_threshold"]["unit"], "V/m");
}

#[test]
fn malformed_config_exits_2_without_output() {
    let sb = Sandbox::new();
    let cfg = sb.file("bad.json", r#"{"cavity": {"mass_kg": 1.0}"#);
    let out_path = sb.path("report.json");
    let out = paramp(&["threshold", "--config", s(&cfg), "--json-out", s(&out_path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out_path.exists());

    let neg = sb.file("neg.json", &REFERENCE.replace("\"mass_kg\": 2e-6", "\"mass_kg\": -2e-6"));
    let out = paramp(&["threshold", "--config", s(&neg)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cavity.mass_kg"));

    let both = sb.file("both.json", &REFERENCE.replace("\"Q\": 1e10}", "\"f_Hz\": 1e10, \"Q\": 1e10}"));
    assert_eq!(paramp(&["threshold", "--config", s(&both)]).status.code(), Some(2));

    let missing = sb.path("nope.json");
    assert_eq!(paramp(&["threshold", "--config", s(&missing)]).status.code(), Some(2));
}

#[test]
fn pump_frequency_must_match_drive() {
    let sb = Sandbox::new();
    // DC drive at the signal frequency instead of twice it.
    let cfg = sb.file("dc.json", &REFERENCE_DC.replace("\"f_Hz\": 2e10", "\"f_Hz\": 1e10"));
    let out = paramp(&["threshold", "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("twice the signal frequency"));

    // Drive at 2ω but pump cavity tuned elsewhere.
    let cfg = sb.file(
        "dc2.json",
        &REFERENCE_DC.replace(r#""E_p_V_per_m": 1e3}"#, r#""E_p_V_per_m": 1e3, "f_Hz": 2e10}"#)
            .replace("\"f_Hz\": 2e10, \"Q\"", "\"f_Hz\": 3e10, \"Q\""),
    );
    let out = paramp(&["threshold", "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pump frequency"));
}

#[test]
fn simulate_row_count_and_header() {
    let sb = Sandbox::new();
    let cfg = sb.file(
        "sim.json",
        &desk(r#"{"n_cycles": 10, "steps_per_cycle": 500, "record_stride": 1, "seed_voltage_V": 1.0}"#),
    );
    let out_path = sb.path("trace.csv");
    let out = paramp(&["simulate", "--config", s(&cfg), "--out", s(&out_path)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t_s,q_C,i_A,x_m,v_m_per_s,U_E_J,U_B_J,W_in_J,Q_diss_J"
    );
    assert_eq!(lines.count(), 5001);
    // 17 significant digits in scientific notation.
    let first = text.lines().nth(1).unwrap().split(',').nth(1).unwrap();
    assert_eq!(first.split('e').next().unwrap().replace('.', "").len(), 17);
}

#[test]
fn simulate_is_byte_deterministic() {
    let sb = Sandbox::new();
    let cfg = sb.file(
        "sim.json",
        &desk(r#"{"n_cycles": 20, "seed_voltage_V": 1.0, "record_stride": 3}"#)
            .replace("\"v_2w_m_per_s\": 0.0", "\"v_2w_m_per_s\": 40.0, \"phase_rad\": 0.3"),
    );
    let a = paramp(&["simulate", "--config", s(&cfg)]);
    let b = paramp(&["simulate", "--config", s(&cfg)]);
    assert!(a.status.success());
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn undriven_run_rings_down() {
    let sb = Sandbox::new();
    let cfg = sb.file(
        "sim.json",
        &desk(r#"{"n_cycles": 30, "steps_per_cycle": 200, "seed_voltage_V": 1.0}"#),
    );
    let out = paramp(&["simulate", "--config", s(&cfg)]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let ue = csv_column(&text, "U_E_J");
    let ub = csv_column(&text, "U_B_J");
    let total: Vec<f64> = ue.iter().zip(&ub).map(|(a, b)| a + b).collect();
    let maxima: Vec<f64> = total[..30 * 200]
        .chunks(200)
        .map(|c| c.iter().cloned().fold(0.0, f64::max))
        .collect();
    assert!(maxima.windows(2).all(|w| w[1] < w[0]), "{maxima:?}");
}

#[test]
fn gap_closure_exits_3_and_leaves_no_file() {
    let sb = Sandbox::new();
    let cfg = sb.file(
        "close.json",
        &desk(r#"{"n_cycles": 5, "q0_C": 1e-13, "v0_m_per_s": -1e3}"#)
            .replace(r#"{"kind": "kinematic", "v_2w_m_per_s": 0.0}"#, r#"{"kind": "no_bias", "E_p_V_per_m": 1.0}"#),
    );
    let out_path = sb.path("trace.csv");
    let out = paramp(&["simulate", "--config", s(&cfg), "--out", s(&out_path)]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!out_path.exists());
    assert_eq!(std::fs::read_dir(sb.dir.path()).unwrap().count(), 1);
}

#[test]
fn simulate_requires_sim_section() {
    let sb = Sandbox::new();
    let cfg = sb.file("reference.json", REFERENCE);
    assert_eq!(paramp(&["simulate", "--config", s(&cfg)]).status.code(), Some(2));
}

#[test]
fn find_threshold_matches_analytic() {
    let sb = Sandbox::new();
    let cfg = sb.file("desk.json", &desk(r#"{"n_cycles": 200, "seed_voltage_V": 1.0, "record_stride": 5}"#));
    let v = json_of(&paramp(&["find-threshold", "--config", s(&cfg), "--tol", "0.01"]));
    assert!(value(&v, "rel_diff") <= 0.05, "{v}");
    assert!(value(&v, "cycles_simulated") >= 200.0);
    for key in ["v_threshold_analytic", "v_threshold_numeric", "rel_diff", "tol", "cycles_simulated"] {
        assert!(v[key]["unit"].is_string(), "{key}");
    }
}

#[test]
fn find_threshold_lossless_exits_4() {
    let sb = Sandbox::new();
    let cfg = sb.file(
        "desk.json",
        &desk(r#"{"n_cycles": 50, "seed_voltage_V": 1.0, "record_stride": 5, "lossless": true}"#),
    );
    let out = paramp(&["find-threshold", "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(out.stdout.is_empty());
}

#[test]
fn sweep_q_gives_cube_law() {
    let sb = Sandbox::new();
    let cfg = sb.file("reference.json", REFERENCE);
    let out_path = sb.path("sweep.csv");
    let out = paramp(&[
        "--threads", "3", "sweep", "--config", s(&cfg), "--axis", "Q", "--min", "1e8", "--max", "1e12",
        "--points", "5", "--log", "--out", s(&out_path),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let q = csv_column(&text, "Q");
    let p = csv_column(&text, "P_threshold_no_bias_W");
    assert_eq!(q.len(), 5);
    assert!(q.windows(2).all(|w| w[0] < w[1]));
    assert_eq!((q[0], q[4]), (1e8, 1e12));
    assert!((loglog_slope(&q, &p) + 3.0).abs() < 1e-12);
}

#[test]
fn sweep_e_dc_inverse_square() {
    let sb = Sandbox::new();
    let cfg = sb.file("dc.json", REFERENCE_DC);
    let out = paramp(&[
        "sweep", "--config", s(&cfg), "--axis", "E_dc", "--min", "1e4", "--max", "1e7", "--points", "7", "--log",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let e = csv_column(&text, "E_dc_V_per_m");
    let p = csv_column(&text, "dc_P_threshold_W");
    assert!((loglog_slope(&e, &p) + 2.0).abs() < 1e-12);
}

#[test]
fn sweep_from_config_section_two_points() {
    let sb = Sandbox::new();
    let cfg = sb.file(
        "mass.json",
        &REFERENCE.replace(
            "\"drive\"",
            r#""sweep": {"axis": "mass_kg", "min": 1e-6, "max": 4e-6, "points": 2}, "drive""#,
        ),
    );
    let out = paramp(&["sweep", "--config", s(&cfg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    let p = csv_column(&text, "P_threshold_no_bias_W");
    assert!((p[1] / p[0] - 4.0).abs() < 1e-12);
}

#[test]
fn sweep_rejects_bad_axis() {
    let sb = Sandbox::new();
    let cfg = sb.file("reference.json", REFERENCE);
    let bad = ["sweep", "--config", s(&cfg), "--axis", "colour", "--min", "1", "--max", "2", "--points", "3"];
    assert_eq!(paramp(&bad).status.code(), Some(2));
    // E_dc needs a dc_bias drive.
    let no_dc = ["sweep", "--config", s(&cfg), "--axis", "E_dc", "--min", "1", "--max", "2", "--points", "3"];
    assert_eq!(paramp(&no_dc).status.code(), Some(2));
    let one = ["sweep", "--config", s(&cfg), "--axis", "Q", "--min", "1e3", "--max", "1e4", "--points", "1"];
    assert_eq!(paramp(&one).status.code(), Some(2));
    let none = ["sweep", "--config", s(&cfg)];
    assert_eq!(paramp(&none).status.code(), Some(2));
}

#[test]
fn frequencies_in_hz_and_rad_agree() {
    let sb = Sandbox::new();
    let hz = sb.file(
        "hz.json",
        &REFERENCE.replace("\"omega_rad_per_s\": 62831853071.79586", "\"f_Hz\": 1e10"),
    );
    let rad = sb.file("rad.json", REFERENCE);
    let a = value(&json_of(&paramp(&["threshold", "--config", s(&hz)])), "P_threshold_no_bias");
    let b = value(&json_of(&paramp(&["threshold", "--config", s(&rad)])), "P_threshold_no_bias");
    assert_eq!(TAU * 1e10, 62831853071.79586);
    assert_eq!(a, b);
}
