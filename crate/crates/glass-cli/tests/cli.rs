//! End-to-end tests of the `glass` binary: spec ingestion, exit codes,
//! trajectory CSV, DOT export, and report determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use glass_cli::spec_file;
use glass_core::fixtures;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn glass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glass")).args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

const FIXTURES: [&str; 6] =
    ["net_a.json", "net_b.json", "net_c.json", "net_d.json", "net_e.json", "net_f.json"];

// ---------------------------------------------------------------- spec files

#[test]
fn fixture_files_match_the_reference_networks() {
    let reference = [
        fixtures::net_a(),
        fixtures::net_b(),
        fixtures::net_c(),
        fixtures::net_d(),
        fixtures::net_e(),
        fixtures::net_f(),
    ];
    for (name, net) in FIXTURES.iter().zip(&reference) {
        let text = fs::read_to_string(fixture(name)).unwrap();
        let parsed = spec_file::parse(&text).unwrap().to_network().unwrap();
        assert_eq!(&parsed, net, "{name}");
    }
}

#[test]
fn canonical_serialization_round_trips_the_fixtures() {
    for name in FIXTURES {
        let text = fs::read_to_string(fixture(name)).unwrap();
        let file = spec_file::parse(&text).unwrap();
        let again = spec_file::parse(&file.canonical_json()).unwrap();
        assert_eq!(file, again, "{name}");
        assert_eq!(file.to_network().unwrap(), again.to_network().unwrap(), "{name}");
        assert_eq!(file.digest(), again.digest(), "{name}");
    }
}

// ------------------------------------------------------------------ validate

#[test]
fn validate_accepts_every_shipped_fixture() {
    for name in FIXTURES {
        let out = glass(&["validate", fixture(name).to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{name}: {}", stderr_of(&out));
        assert_eq!(stdout_of(&out), "ok\n", "{name}");
    }
}

/// Writes a mutated copy of a fixture and returns its path.
fn corrupted(
    dir: &tempfile::TempDir,
    name: &str,
    mutate: impl FnOnce(&mut serde_json::Value),
) -> PathBuf {
    let text = fs::read_to_string(fixture(name)).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    mutate(&mut value);
    let path = dir.path().join(name);
    fs::write(&path, serde_json::to_string_pretty(&value).unwrap()).unwrap();
    path
}

#[test]
fn validate_reports_a_focal_point_on_a_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let path = corrupted(&dir, "net_b.json", |v| {
        v["focal_points"]["0,0"][1] = serde_json::json!(0.0);
    });
    let out = glass(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout_of(&out);
    assert!(text.contains("focal coordinate 1"), "{text}");
    assert!(text.contains("region 0,0"), "{text}");
}

#[test]
fn validate_reports_a_missing_region() {
    let dir = tempfile::tempdir().unwrap();
    let path = corrupted(&dir, "net_b.json", |v| {
        v["focal_points"].as_object_mut().unwrap().remove("0,1");
    });
    let out = glass(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout_of(&out).contains("region 0,1: no focal point"), "{}", stdout_of(&out));
}

#[test]
fn validate_reports_a_non_increasing_ladder() {
    let dir = tempfile::tempdir().unwrap();
    let path = corrupted(&dir, "net_c.json", |v| {
        v["variables"][0]["thresholds"] = serde_json::json!([1.0, 0.0]);
    });
    let out = glass(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout_of(&out).contains("not strictly increasing"), "{}", stdout_of(&out));
}

#[test]
fn validate_rejects_malformed_json_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{not json").unwrap();
    let out = glass(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn validate_rejects_wrong_focal_arity_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = corrupted(&dir, "net_b.json", |v| {
        v["focal_points"]["0,0"] = serde_json::json!([1.0, -2.0, 0.5]);
    });
    let out = glass(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn validate_rejects_a_missing_file_with_exit_2() {
    let out = glass(&["validate", "no_such_file.json"]);
    assert_eq!(code(&out), 2);
}

// ------------------------------------------------------------------ simulate

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn simulate_attracting_cycle_returns_to_the_start_every_lap() {
    let out = glass(&[
        "simulate",
        fixture("net_b.json").to_str().unwrap(),
        "--start",
        "-1,0",
        "--max-events",
        "12",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    let rows = csv_rows(&stdout_of(&out));
    assert_eq!(rows[0], ["event_index", "cumulative_time", "x_1", "x_2", "wall"]);
    assert_eq!(rows.len(), 1 + 1 + 12 + 1);
    assert_eq!(rows.last().unwrap()[0], "status");
    assert_eq!(rows.last().unwrap()[1], "Budget");

    let lap_period = 16f64.ln();
    for lap in 1..=3usize {
        let row = &rows[1 + 4 * lap];
        assert_eq!(row[0], (4 * lap).to_string());
        let t: f64 = row[1].parse().unwrap();
        let x1: f64 = row[2].parse().unwrap();
        let x2: f64 = row[3].parse().unwrap();
        assert!((t - lap as f64 * lap_period).abs() <= 1e-9, "lap {lap} time {t}");
        assert!((x1 + 1.0).abs() <= 1e-9 && x2.abs() <= 1e-9, "lap {lap} point ({x1}, {x2})");
        assert_eq!(row[4], "x_2@0:down");
    }
}

#[test]
fn simulate_marginal_cycle_magnitude_follows_the_crossing_count() {
    let out = glass(&[
        "simulate",
        fixture("net_a.json").to_str().unwrap(),
        "--start",
        "0,-1",
        "--max-events",
        "400",
    ]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&stdout_of(&out));
    let last_event = &rows[rows.len() - 2];
    assert_eq!(last_event[0], "400");
    let x1: f64 = last_event[2].parse().unwrap();
    let x2: f64 = last_event[3].parse().unwrap();
    let magnitude = x1.abs().max(x2.abs());
    assert!((magnitude - 1.0 / 401.0).abs() <= 1e-9, "magnitude {magnitude}");
}

#[test]
fn simulate_contracting_cycle_reports_spine_convergence() {
    let out = glass(&[
        "simulate",
        fixture("net_e.json").to_str().unwrap(),
        "--start",
        "-1,0",
    ]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&stdout_of(&out));
    assert_eq!(rows.last().unwrap()[1], "SpineConvergence");
    let total: f64 = rows[rows.len() - 2][1].parse().unwrap();
    assert!(total.is_finite());
}

#[test]
fn simulate_corner_start_is_a_domain_violation() {
    let out = glass(&[
        "simulate",
        fixture("net_b.json").to_str().unwrap(),
        "--start",
        "0,0",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr_of(&out).contains("entry region"), "{}", stderr_of(&out));
}

#[test]
fn simulate_writes_the_same_csv_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trajectory.csv");
    let net = fixture("net_b.json");
    let args_base =
        ["simulate", net.to_str().unwrap(), "--start", "-1,0", "--max-events", "8"];
    let to_stdout = glass(&args_base);
    let mut args = args_base.to_vec();
    args.extend_from_slice(&["--out", csv.to_str().unwrap()]);
    let to_file = glass(&args);
    assert_eq!(code(&to_file), 0);
    assert_eq!(fs::read_to_string(&csv).unwrap(), stdout_of(&to_stdout));
}

#[test]
fn simulate_rejects_unparseable_starts_with_exit_2() {
    for bad in ["a,b", "1;2", "1,2,3", ""] {
        let out = glass(&[
            "simulate",
            fixture("net_b.json").to_str().unwrap(),
            "--start",
            bad,
        ]);
        assert_eq!(code(&out), 2, "start {bad:?}");
    }
}

// ----------------------------------------------------------------------- std

fn dot_nodes_and_edges(text: &str) -> (usize, Vec<(String, String)>) {
    let mut nodes = 0;
    let mut edges = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some((from, to)) = line.split_once(" -> ") {
            edges.push((
                from.trim_matches('"').to_string(),
                to.trim_end_matches(';').trim_matches('"').to_string(),
            ));
        } else if line.starts_with('"') && line.ends_with(';') {
            nodes += 1;
        }
    }
    (nodes, edges)
}

#[test]
fn std_exports_the_attracting_cycle_graph() {
    let out = glass(&["std", fixture("net_b.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let (nodes, edges) = dot_nodes_and_edges(&stdout_of(&out));
    assert_eq!(nodes, 4);
    let expected = [("0,0", "1,0"), ("1,0", "1,1"), ("1,1", "0,1"), ("0,1", "0,0")];
    assert_eq!(edges.len(), 4);
    for (from, to) in expected {
        assert!(edges.iter().any(|(f, t)| f == from && t == to), "missing {from} -> {to}");
    }
}

#[test]
fn std_exports_six_regions_for_the_two_threshold_fixture() {
    let out = glass(&["std", fixture("net_c.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let (nodes, edges) = dot_nodes_and_edges(&stdout_of(&out));
    assert_eq!((nodes, edges.len()), (6, 6));
}

fn write_equilibrium_net(dir: &tempfile::TempDir) -> PathBuf {
    let path = dir.path().join("flat.json");
    fs::write(
        &path,
        r#"{
  "variables": [{"name": "x1", "thresholds": [0.0]}],
  "focal_points": {"0": [-0.5], "1": [0.5]}
}"#,
    )
    .unwrap();
    path
}

#[test]
fn std_lists_equilibrium_regions_without_edges() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_equilibrium_net(&dir);
    let out = glass(&["std", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let (nodes, edges) = dot_nodes_and_edges(&stdout_of(&out));
    assert_eq!((nodes, edges.len()), (2, 0));
}

#[test]
fn std_names_the_region_missing_a_focal_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = corrupted(&dir, "net_b.json", |v| {
        v["focal_points"].as_object_mut().unwrap().remove("0,1");
    });
    let out = glass(&["std", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr_of(&out).contains("0,1"), "{}", stderr_of(&out));
}

// ------------------------------------------------------------------- analyze

fn analyze_json(args: &[&str]) -> serde_json::Value {
    let out = glass(args);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    serde_json::from_str(&stdout_of(&out)).expect("report is valid JSON")
}

#[test]
fn analyze_auto_reports_the_attracting_orbit() {
    let v = analyze_json(&["analyze", fixture("net_b.json").to_str().unwrap(), "--auto"]);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 1);
    let r = &reports[0];
    assert_eq!(r["verdict"], "UniqueOrbit");
    assert_eq!(r["cycle"], serde_json::json!(["0,0", "1,0", "1,1", "0,1"]));
    assert!((r["lambda"].as_f64().unwrap() - 16.0).abs() <= 1e-9);
    assert!((r["period"].as_f64().unwrap() - 16f64.ln()).abs() <= 1e-9);
    let fp = r["fixed_point"].as_array().unwrap();
    assert!((fp[0].as_f64().unwrap() + 1.0).abs() <= 1e-9);
    assert!(fp[1].as_f64().unwrap().abs() <= 1e-9);
    assert_eq!(r["orbit_waypoints"].as_array().unwrap().len(), 4);
    assert!(r["network_digest"].as_str().unwrap().starts_with("sha256:"));
    assert_eq!(r["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["certificates"]["marginal"], false);
}

#[test]
fn analyze_auto_reports_the_ideal_orbit_with_its_invariance_certificate() {
    let v = analyze_json(&["analyze", fixture("net_c.json").to_str().unwrap(), "--auto"]);
    let r = &v.as_array().unwrap()[0];
    assert_eq!(r["verdict"], "IdealUniqueOrbit");
    assert_eq!(r["certificates"]["invariance_holds"], true);
    assert!(r["certificates"]["invariance_margin"].as_f64().unwrap() > 0.0);
    assert_eq!(r["orbit_waypoints"].as_array().unwrap().len(), 6);
}

#[test]
fn analyze_auto_reports_the_marginal_cycle_as_degenerate() {
    let v = analyze_json(&["analyze", fixture("net_a.json").to_str().unwrap(), "--auto"]);
    let r = &v.as_array().unwrap()[0];
    assert_eq!(r["verdict"], "Degenerate");
    assert_eq!(r["certificates"]["marginal"], true);
    assert!(r["fixed_point"].is_null());
    assert!(r["period"].is_null());
    assert_eq!(r["orbit_waypoints"].as_array().unwrap().len(), 0);
}

#[test]
fn analyze_cycle_token_forms_agree() {
    let digits = glass(&[
        "analyze",
        fixture("net_b.json").to_str().unwrap(),
        "--cycle",
        "00>10>11>01",
    ]);
    let commas = glass(&[
        "analyze",
        fixture("net_b.json").to_str().unwrap(),
        "--cycle",
        "0,0>1,0>1,1>0,1",
    ]);
    assert_eq!(code(&digits), 0);
    assert_eq!(digits.stdout, commas.stdout);
}

#[test]
fn analyze_rejects_a_non_adjacent_cycle() {
    let out = glass(&[
        "analyze",
        fixture("net_b.json").to_str().unwrap(),
        "--cycle",
        "00>11>10>01",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr_of(&out).contains("non-adjacent"), "{}", stderr_of(&out));
}

#[test]
fn analyze_rejects_a_duplicated_region() {
    let out = glass(&[
        "analyze",
        fixture("net_b.json").to_str().unwrap(),
        "--cycle",
        "00>10>00>01",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr_of(&out).contains("more than once"), "{}", stderr_of(&out));
}

#[test]
fn analyze_rejects_bad_cycle_tokens_with_exit_2() {
    for bad in ["0x>10", "0,0>1", "0,0>>1,1", "000>100"] {
        let out = glass(&[
            "analyze",
            fixture("net_b.json").to_str().unwrap(),
            "--cycle",
            bad,
        ]);
        assert_eq!(code(&out), 2, "cycle {bad:?}");
    }
}

#[test]
fn analyze_requires_a_cycle_or_auto() {
    let out = glass(&["analyze", fixture("net_b.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn analyze_auto_without_attractors_emits_an_empty_array() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_equilibrium_net(&dir);
    let out = glass(&["analyze", path.to_str().unwrap(), "--auto"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "[]\n");
}

#[test]
fn analyze_report_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let to_stdout = glass(&["analyze", fixture("net_c.json").to_str().unwrap(), "--auto"]);
    let to_file = glass(&[
        "analyze",
        fixture("net_c.json").to_str().unwrap(),
        "--auto",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&to_file), 0);
    assert_eq!(fs::read(&path).unwrap(), to_stdout.stdout);
}

#[test]
fn analyze_reports_are_byte_identical_across_runs() {
    let path = fixture("net_c.json");
    let first = glass(&["analyze", path.to_str().unwrap(), "--auto"]);
    for _ in 0..2 {
        let again = glass(&["analyze", path.to_str().unwrap(), "--auto"]);
        assert_eq!(first.stdout, again.stdout);
    }
}
