use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pseudomode_control::dynamics::{propagate, ReducedState, SystemParams};
use pseudomode_control::io::RunConfig;
use pseudomode_control::reachable::{map_options, map_reachable, CellStatus, MAP_STOP_BELOW};
use pseudomode_control::ControlField;
use tempfile::TempDir;

const SQRT5: &str = "2.2360679774997896";

fn pmctl(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmctl"))
        .args([
            cmd,
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .args(extra)
        .output()
        .expect("pmctl runs")
}

fn write_config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

/// Parses a CSV strictly: fixed header, every non-status field a plain
/// decimal number.
fn read_csv(path: &Path, header: &[&str]) -> Vec<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(false)
        .from_path(path)
        .unwrap();
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), header);
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            for (name, field) in header.iter().zip(r.iter()) {
                if *name != "status" {
                    assert!(
                        field
                            .chars()
                            .all(|c| c.is_ascii_digit() || "-+.eEinfNa".contains(c)),
                        "{name}: {field:?}"
                    );
                    field.parse::<f64>().unwrap();
                }
            }
            r.iter().map(str::to_string).collect()
        })
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

const TRAJECTORY: [&str; 7] = ["t_q", "re_c1", "im_c1", "re_y", "im_y", "pop", "omega"];

#[test]
fn simulate_round_trips_in_process_propagation() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "sim.json",
        &format!(
            r#"{{"schema": 1, "system": {{"p": {SQRT5}, "q": 1.0}}, "shape": {{"kind": "constant", "omega_max": 0.0}}, "horizon": 3.0}}"#
        ),
    );
    let out = dir.path().join("out");
    let res = pmctl("simulate", &cfg, &out, &[]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let rows = read_csv(&out.join("trajectory.csv"), &TRAJECTORY);

    let params = SystemParams::new(5f64.sqrt(), 1.0).unwrap();
    let field = ControlField::constant(0.0, 0.02, 150).unwrap();
    let traj = propagate(&params, &field, ReducedState::excited());
    assert_eq!(rows.len(), traj.len());
    for (row, (t, s)) in rows.iter().zip(traj.times.iter().zip(&traj.states)) {
        assert_eq!(num(&row[0]), *t);
        assert_eq!(num(&row[1]), s.c1.re);
        assert_eq!(num(&row[2]), s.c1.im);
        assert_eq!(num(&row[3]), s.y.re);
        assert_eq!(num(&row[4]), s.y.im);
        assert_eq!(num(&row[5]), s.population());
        assert_eq!(num(&row[6]), 0.0);
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["n_steps"], 150);
}

#[test]
fn zero_horizon_gives_one_row() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "zero.json",
        r#"{"schema": 1, "system": {"p": 1.0, "q": 1.0}, "shape": {"kind": "constant", "omega_max": 3.0}, "horizon": 0.0}"#,
    );
    let out = dir.path().join("out");
    let res = pmctl("simulate", &cfg, &out, &[]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let rows = read_csv(&out.join("trajectory.csv"), &TRAJECTORY);
    assert_eq!(rows.len(), 1);
    assert_eq!(num(&rows[0][0]), 0.0);
    assert_eq!(num(&rows[0][5]), 1.0);
}

#[test]
fn reachable_matches_in_process_map() {
    let dir = TempDir::new().unwrap();
    let text = r#"{"schema": 1, "system": {"p": 0.25, "q": 1.0}, "dt": 0.1,
        "optimizer": {"omega_max": 2.0, "seed": 3, "max_iters": 300},
        "grid": {"t_max": 20.0, "n_t": 5, "n_pop": 5}}"#;
    let cfg = write_config(&dir, "map.json", text);
    let out = dir.path().join("out");
    let res = pmctl("reachable", &cfg, &out, &[]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let rows = read_csv(
        &out.join("grid.csv"),
        &["t_q", "pop_target", "status", "final_cost"],
    );

    let config = RunConfig::from_json(text).unwrap();
    let mut opts = config.optimizer.options();
    opts.stop_below = Some(MAP_STOP_BELOW);
    assert_eq!(opts.stop_below, map_options().stop_below);
    let map = map_reachable(
        &config.single_params().unwrap(),
        &config.grid_spec().unwrap(),
        &opts,
        3,
    )
    .unwrap();
    assert_eq!(rows.len(), 25);
    for (row, cell) in rows.iter().zip(&map.cells) {
        assert_eq!(num(&row[0]), cell.t_q);
        assert_eq!(num(&row[1]), cell.pop_target);
        assert_eq!(row[2], cell.status.as_str());
        assert_eq!(num(&row[3]), cell.final_cost);
    }
    let dominant = map.count(CellStatus::ConstantReachable) + map.count(CellStatus::Unreached);
    assert!(dominant >= 20, "{dominant}");

    let boundary = read_csv(&out.join("boundary.csv"), &["omega", "t_q", "pop"]);
    assert!(
        boundary.iter().any(|r| num(&r[0]) == 0.0) && boundary.iter().any(|r| num(&r[0]) == 2.0)
    );
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 3);
    assert_eq!(
        summary["counts"]["constant_reachable"],
        map.count(CellStatus::ConstantReachable)
    );
}

#[test]
fn identical_qubits_have_null_gain() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "sel.json",
        &format!(
            r#"{{"schema": 1, "system": {{"p": {SQRT5}, "q": 1.0}}, "optimizer": {{"restarts": 2, "max_iters": 50}},
                "selectivity": {{"alpha": 0.0, "lambda": 1.0}}}}"#
        ),
    );
    let out = dir.path().join("out");
    let res = pmctl("selectivity", &cfg, &out, &[]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert!(summary["G"].is_null());
    assert_eq!(summary["C"].as_f64().unwrap(), 0.0);
    assert_eq!(summary["pop1"], summary["pop2"]);
    read_csv(&out.join("field.csv"), &["t_q", "omega"]);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");

    let malformed = write_config(
        &dir,
        "bad.json",
        "{\"schema\": 1,\n \"system\": {\"p\": }\n}",
    );
    let res = pmctl("simulate", &malformed, &out, &[]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 2"));

    let invalid = write_config(
        &dir,
        "neg.json",
        r#"{"schema": 1, "system": {"p": -1.0, "q": 1.0}, "horizon": 1.0, "shape": {"kind": "constant", "omega_max": 0.0}}"#,
    );
    assert_eq!(
        pmctl("simulate", &invalid, &out, &[]).status.code(),
        Some(2)
    );
    assert_eq!(
        pmctl("simulate", &dir.path().join("missing.json"), &out, &[])
            .status
            .code(),
        Some(2)
    );

    let overflow = write_config(
        &dir,
        "nan.json",
        r#"{"schema": 1, "system": {"p": 1e200, "q": 1.0}, "horizon": 1.0, "shape": {"kind": "constant", "omega_max": 0.0}}"#,
    );
    let res = pmctl("simulate", &overflow, &dir.path().join("nan"), &[]);
    assert_eq!(
        res.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    assert!(!dir.path().join("nan/trajectory.csv").exists());

    // above the case-2 ceiling at q t = 1.4
    let ceiling = write_config(
        &dir,
        "strict.json",
        &format!(
            r#"{{"schema": 1, "system": {{"p": {SQRT5}, "q": 1.0}}, "initial": "case2", "horizon": 1.4,
                "optimizer": {{"omega_max": 10.0, "target_pop": 0.9, "max_iters": 100}}}}"#
        ),
    );
    assert_eq!(
        pmctl("optimize", &ceiling, &out, &["--strict"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        pmctl("optimize", &ceiling, &out, &[]).status.code(),
        Some(0)
    );
}

fn csv_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "opt.json",
        &format!(
            r#"{{"schema": 1, "system": {{"p": {SQRT5}, "q": 1.0}}, "initial": "case2", "horizon": 1.4,
                "optimizer": {{"omega_max": 10.0, "target_pop": 0.45, "restarts": 4, "max_iters": 200}}}}"#
        ),
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(
        pmctl("optimize", &cfg, &a, &["--threads", "1", "--seed", "9"])
            .status
            .success()
    );
    assert!(
        pmctl("optimize", &cfg, &b, &["--threads", "3", "--seed", "9"])
            .status
            .success()
    );
    let files = csv_bytes(&a);
    assert_eq!(files.len(), 2);
    assert_eq!(files, csv_bytes(&b));
}

#[test]
fn config_echo_reproduces_the_run() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "sel.json",
        &format!(
            r#"{{"schema": 1, "system": {{"p": {SQRT5}, "q": 1.0}}, "optimizer": {{"restarts": 2, "max_iters": 80}},
                "selectivity": {{"alpha": 0.5}}}}"#
        ),
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(pmctl("selectivity", &cfg, &a, &["--seed", "17"])
        .status
        .success());
    let echo = RunConfig::load(&a.join("config.json")).unwrap();
    assert_eq!(echo.optimizer.seed, 17);
    assert!(pmctl("selectivity", &a.join("config.json"), &b, &[])
        .status
        .success());
    assert_eq!(csv_bytes(&a), csv_bytes(&b));
    assert_eq!(
        std::fs::read(a.join("config.json")).unwrap(),
        std::fs::read(b.join("config.json")).unwrap()
    );
}

#[test]
fn outputs_are_in_q_units() {
    let dir = TempDir::new().unwrap();
    let unit = write_config(
        &dir,
        "unit.json",
        &format!(
            r#"{{"schema": 1, "system": {{"p": {SQRT5}, "q": 1.0}}, "shape": {{"kind": "constant", "omega_max": 10.0}}, "horizon": 1.0}}"#
        ),
    );
    let scaled = write_config(
        &dir,
        "scaled.json",
        r#"{"schema": 1, "units": {"q": 2.0}, "system": {"p": 4.47213595499958, "q": 2.0},
            "shape": {"kind": "constant", "omega_max": 20.0}, "horizon": 0.5, "dt": 0.01}"#,
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(pmctl("simulate", &unit, &a, &[]).status.success());
    assert!(pmctl("simulate", &scaled, &b, &[]).status.success());
    let ra = read_csv(&a.join("trajectory.csv"), &TRAJECTORY);
    let rb = read_csv(&b.join("trajectory.csv"), &TRAJECTORY);
    assert_eq!(ra.len(), rb.len());
    for (x, y) in ra.iter().zip(&rb) {
        for (u, v) in x.iter().zip(y) {
            assert!((num(u) - num(v)).abs() < 1e-12, "{u} vs {v}");
        }
    }
}
