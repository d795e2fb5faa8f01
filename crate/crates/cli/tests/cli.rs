use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use zchms_core::scenario::{save_scenario, synth_scenario};

fn zchms(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zchms"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("ZCHMS_ENGINE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn summary(dir: &Path, mode: &str) -> serde_json::Value {
    let text = fs::read_to_string(dir.join(format!("summary_{mode}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn identify_first_order_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let o = zchms(&["identify", "--synthetic", "first-order", "--t-true", "1.27", "--step", "30:125"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let t: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("T_trans = "))
        .and_then(|r| r.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((t - 1.27).abs() < 1e-6, "{out}");
    assert!(out.contains("RMSE = 0.000000"), "{out}");
    let csv = fs::read_to_string(dir.path().join("identify_fit.csv")).unwrap();
    assert!(csv.starts_with("step,qss_tph,observed_dis_tph,fitted_dis_tph\n"));
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn identify_second_order_reports_error_share() {
    let dir = tempfile::tempdir().unwrap();
    let o = zchms(&["identify", "--synthetic", "second-order", "--step", "30:125", "--hold", "4"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("% of rated"));
}

#[test]
fn identify_reads_trajectory_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    fs::write(&path, "step,qss_tph,dis_tph\n0,100,100\n1,120,110\n2,120,120\n3,90,105\n").unwrap();
    let o = zchms(&["identify", "--trajectory", path.to_str().unwrap()], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("beta = 0.500000"), "{}", stdout(&o));
}

#[test]
fn identify_flat_trajectory_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.csv");
    fs::write(&path, "step,qss_tph,dis_tph\n0,100,100\n1,100,100\n").unwrap();
    let o = zchms(&["identify", "--trajectory", path.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unidentifiable"));
}

#[test]
fn missing_trajectory_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let o = zchms(&["identify", "--trajectory", "/does/not/exist.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/does/not/exist.csv"));
}

#[test]
fn schedule_writes_outputs_and_flexibility_pays() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.json");
    save_scenario(&synth_scenario(4, 24), &cfg).unwrap();
    let cfg = cfg.to_str().unwrap();
    for mode in ["baseline", "ae-sf-flex"] {
        let o = zchms(&["schedule", "--config", cfg, "--mode", mode], dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
        for f in [format!("dispatch_{mode}.csv"), format!("problem_{mode}.lp")] {
            assert!(dir.path().join(f).exists());
        }
    }
    let base = summary(dir.path(), "baseline")["cost_per_ton"].as_f64().unwrap();
    let flex = summary(dir.path(), "ae-sf-flex")["cost_per_ton"].as_f64().unwrap();
    assert!(flex <= base, "{flex} > {base}");
    let header = fs::read_to_string(dir.path().join("dispatch_baseline.csv")).unwrap();
    assert!(header.starts_with(
        "hour,P_AE,P_buy,P_sell,P_Eh,P_Leh,P_comp,P_exp,M_DRI_dis,M_DRI_QSS,HT,Lts,b_grid\n"
    ));
}

#[test]
fn unknown_mode_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = zchms(&["schedule", "--seed", "1", "--mode", "turbo"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn infeasible_schedule_exits_three_with_hint() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = synth_scenario(2, 6);
    s.h2_request.values.iter_mut().for_each(|x| *x = 20.0);
    let cfg = dir.path().join("s.json");
    save_scenario(&s, &cfg).unwrap();
    let o = zchms(&["schedule", "--config", cfg.to_str().unwrap(), "--mode", "ae-flex"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("hint: ht_terminal"), "{}", stderr(&o));
}

#[test]
fn unknown_engine_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_zchms"))
        .args(["schedule", "--seed", "1", "--mode", "baseline", "--out"])
        .arg(dir.path())
        .env("ZCHMS_ENGINE", "gurobi")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gurobi"));
}

#[test]
fn compare_writes_three_row_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = zchms(&["compare", "--seed", "1"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let table = fs::read_to_string(dir.path().join("comparison.txt")).unwrap();
    assert_eq!(table, stdout(&o));
    let baseline = table.lines().find(|l| l.starts_with("baseline ")).unwrap();
    let cells: Vec<&str> = baseline.split_whitespace().collect();
    assert_eq!(cells[3], "0.000");
    assert_eq!(cells[4], "0.000");
    assert!(table.lines().any(|l| l.starts_with("ae-flex ")));
    assert!(table.lines().any(|l| l.starts_with("ae-sf-flex ")));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("dr_report.json")).unwrap()).unwrap();
    assert_eq!(report["rows"].as_array().unwrap().len(), 3);
    let csv = fs::read_to_string(dir.path().join("dr_report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 25);
}

#[test]
fn compare_with_oracle_appends_agreement_line() {
    let dir = tempfile::tempdir().unwrap();
    let o = zchms(&["compare", "--seed", "9", "--horizon", "4", "--oracle"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let last = stdout(&o).lines().last().unwrap().to_string();
    assert!(last.starts_with("oracle:") && !last.contains("DISAGREES"), "{last}");
}

#[test]
fn oracle_refuses_long_horizons() {
    let dir = tempfile::tempdir().unwrap();
    let o = zchms(&["compare", "--seed", "9", "--horizon", "6", "--oracle"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_rebuilds_the_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let o = zchms(&["compare", "--seed", "3"], dir.path());
    assert!(o.status.success());
    let r = zchms(&["report"], dir.path());
    assert!(r.status.success(), "{}", stderr(&r));
    assert_eq!(stdout(&r), stdout(&o));
}

#[test]
fn synth_output_feeds_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let o = zchms(&["synth", "--seed", "7", "--horizon", "12"], dir.path());
    assert!(o.status.success());
    let cfg = dir.path().join("scenario.json");
    assert!(dir.path().join("scenario.csv").exists());
    let s = zchms(&["schedule", "--config", cfg.to_str().unwrap(), "--mode", "ae-flex"], dir.path());
    assert!(s.status.success(), "{}", stderr(&s));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["engine"], "highs");
    assert_eq!(manifest["config"], cfg.to_str().unwrap());
    assert!(manifest["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn native_engine_produces_the_same_table() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(zchms(&["compare", "--seed", "1", "--horizon", "12"], a.path()).status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_zchms"))
        .args(["compare", "--seed", "1", "--horizon", "12", "--out"])
        .arg(b.path())
        .env("ZCHMS_ENGINE", "native")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read_to_string(a.path().join("comparison.txt")).unwrap(),
        fs::read_to_string(b.path().join("comparison.txt")).unwrap()
    );
}
