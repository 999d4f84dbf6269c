use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use margin_bounds::report::SWEEP_HEADER;
use margin_bounds::verify::OPERATION_ANCHORS;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_margin-bounds"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn body_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

const GRID: [&str; 9] = ["sweep", "--c", "8,16,50", "--m", "100", "--gamma", "1", "--dg", "1,2,3"];

#[test]
fn sweep_grid_with_one_skipped_row() {
    let out = run(&GRID);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(header, SWEEP_HEADER);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 9);
    let skipped: Vec<_> = rows.iter().filter(|r| !r[12].is_empty()).collect();
    assert_eq!(skipped.len(), 1);
    assert_eq!((&skipped[0][0], &skipped[0][4]), ("50", "3"));
    assert!(skipped[0][12].contains("C^1.2"));
    assert!(skipped[0][8].is_empty());
    for r in rows.iter().filter(|r| r[12].is_empty()) {
        let v: f64 = r[8].parse().unwrap();
        assert!(v.is_finite() && v > 0.0);
        assert!(r[9].is_empty() && r[10].is_empty());
    }
}

#[test]
fn json_rows_match_csv() {
    let csv_text = stdout(&run(&GRID));
    let json_out = run(&[&GRID[..], &["--format", "json"]].concat());
    let doc: serde_json::Value = serde_json::from_slice(&json_out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    let csv_rows = body_lines(&csv_text);
    assert_eq!(rows.len(), csv_rows.len() - 1);
    let expected: BTreeSet<&str> = SWEEP_HEADER.iter().copied().collect();
    for (row, line) in rows.iter().zip(&csv_rows[1..]) {
        let keys: BTreeSet<&str> = row.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, expected);
        let c = line.split(',').next().unwrap();
        assert_eq!(row["C"].to_string(), c);
        if let Some(b) = row["thm3_bound"].as_f64() {
            let field = line.split(',').nth(8).unwrap();
            assert_eq!(field.parse::<f64>().unwrap(), b);
        }
    }
}

#[test]
fn metadata_records_seed_and_flags() {
    let out = run(&["sweep", "--c-range", "8:32:2", "--m", "1e6", "--gamma", "1", "--dg", "1", "--seed", "42"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# tool: margin-bounds "));
    assert!(text.contains("# seed: 42\n"));
    assert!(text.contains("--c-range=8:32:2"));
    assert_eq!(body_lines(&text).len(), 4);
    let json = run(&["bound", "--c", "8", "--m", "1e6", "--dg", "1", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(doc["metadata"]["seed"], 0);
    assert_eq!(doc["metadata"]["flags"]["dg"], "1.0");
    assert!((doc["bound"]["thm3_bound"].as_f64().unwrap() - 7.71601763253892).abs() < 1e-9);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["sweep", "--c-range", "8:4096", "--m", "100", "--gamma", "1", "--dg", "1"][..],
        &["sweep", "--c", "8", "--m", "100", "--gamma", "1"],
        &["sweep", "--c", "4", "--m", "100", "--gamma", "1", "--dg", "1"],
        &["bound", "--c", "8", "--m", "8", "--dg", "3"],
        &["verify", "--format", "xml"],
        &["capacity", "--class", "/nonexistent.json"],
        &["verify", "--out", "/nonexistent/dir/report.csv"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = run(&["bound", "--c", "8", "--m", "8", "--dg", "3"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("m >= C^1.2"));
}

#[test]
fn injected_fault_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_margin-bounds"))
        .args(["verify", "--trials", "2000", "--inject-fault", "transfer-constant", "--out"])
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("transfer.separation"));
    let text = std::fs::read_to_string(&report).unwrap();
    let row = text
        .lines()
        .find(|l| l.starts_with("transfer.separation,"))
        .unwrap();
    assert!(row.contains(",false,"));
}

#[test]
fn verify_covers_every_anchor() {
    let out = run(&["verify", "--trials", "2000", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["passed"], true);
    let mut covered = BTreeSet::new();
    for check in doc["checks"].as_array().unwrap() {
        assert!(check["instances"].as_u64().unwrap() > 0, "{}", check["name"]);
        for a in check["anchors"].as_array().unwrap() {
            covered.insert(a.as_str().unwrap().to_string());
        }
    }
    let missing: Vec<_> = OPERATION_ANCHORS.iter().filter(|a| !covered.contains(**a)).collect();
    assert!(missing.is_empty(), "uncovered: {missing:?}");
}

fn simulate(dir: &Path, name: &str, args: &[&str]) -> std::path::PathBuf {
    let path = dir.join(name);
    let status = Command::new(env!("CARGO_BIN_EXE_margin-bounds"))
        .arg("simulate")
        .args(args)
        .arg("--out")
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    path
}

#[test]
fn simulate_then_capacity() {
    let dir = tempfile::tempdir().unwrap();
    let stair = simulate(dir.path(), "stair.json", &["--kind", "staircase_known_fatdim", "--n-points", "3", "--dim", "3"]);
    let out = run(&["capacity", "--class", stair.to_str().unwrap(), "--format", "json", "--gamma", "1"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let measures = doc["measures"].as_array().unwrap();
    let get = |name: &str| measures.iter().find(|m| m["measure"] == name).unwrap()["value"].as_f64().unwrap();
    assert_eq!(get("fat_shattering_dim"), 3.0);
    assert_eq!(get("covering_number"), 8.0);
    assert_eq!(get("strong_dim"), 3.0);

    let product = simulate(
        dir.path(),
        "product.json",
        &["--kind", "product_random", "--n-points", "4", "--size", "2", "--c", "3", "--seed", "9"],
    );
    let out = run(&["capacity", "--class", product.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\nrademacher,"));
}

#[test]
fn sweep_with_class_fills_empirical_columns() {
    let dir = tempfile::tempdir().unwrap();
    let class = simulate(dir.path(), "u.json", &["--n-points", "6", "--size", "10", "--seed", "2"]);
    let out = run(&[
        "sweep", "--c", "5", "--m", "6,1000", "--gamma", "0.5", "--dg", "1", "--trials", "500", "--class",
        class.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let lines = body_lines(&text);
    let first: Vec<&str> = lines[1].split(',').collect();
    let second: Vec<&str> = lines[2].split(',').collect();
    assert!(!first[9].is_empty() && !first[10].is_empty());
    assert!(second[9].is_empty() && second[10].is_empty());
    assert!(first[9].parse::<f64>().unwrap() >= first[10].parse::<f64>().unwrap());
}
