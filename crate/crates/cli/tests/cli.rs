use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn sdt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 output")
}

/// Parses CSV text into its header and rows.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn number(cell: &str) -> f64 {
    cell.parse()
        .unwrap_or_else(|_| panic!("not a number: {cell}"))
}

#[test]
fn pairs_lists_the_registry() {
    let out = sdt(&["pairs"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let ids: Vec<&str> = text
        .lines()
        .skip(2)
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(
        ids,
        ["1.1", "1.2", "1.3", "1.4", "1.5", "2.1", "2.2", "2.3", "2.4"]
    );

    let single = stdout(&sdt(&["pairs", "--id", "2.1"]));
    assert_eq!(single.lines().count(), 3);
    assert!(single.lines().nth(2).unwrap().starts_with("2.1"));

    let unknown = sdt(&["pairs", "--id", "9.9"]);
    assert!(!unknown.status.success());
    assert!(stderr(&unknown).contains("unknown pair id"));
}

#[test]
fn pairs_as_json_and_csv() {
    let json: Value =
        serde_json::from_str(&stdout(&sdt(&["pairs", "--format", "json-report"]))).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 9);
    assert_eq!(json[5]["id"], "2.1");
    let (header, rows) = csv_rows(&stdout(&sdt(&[
        "pairs", "--format", "csv", "--id", "2D-SDT",
    ])));
    assert_eq!(
        header,
        [
            "id",
            "dimensions",
            "space-time side",
            "Fourier-Laplace side",
            "note"
        ]
    );
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][1], "d = 2");
}

#[test]
fn verify_single_row_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let path_str = path.to_str().unwrap();
    let args = [
        "verify",
        "--pair",
        "2.1",
        "--dim",
        "2",
        "--f",
        "exp_decay:1",
        "--tol",
        "1e-6",
        "--format",
        "json-report",
        "--out",
        path_str,
    ];
    let out = sdt(&args);
    assert!(out.status.success(), "{}", stderr(&out));
    let first = fs::read_to_string(&path).unwrap();
    let json: Value = serde_json::from_str(&first).unwrap();
    let reports = json.as_array().unwrap();
    assert_eq!(reports.len(), 1);
    let report = &reports[0];
    assert_eq!(report["schema"], 1);
    assert_eq!(report["pair_id"], "2.1");
    assert_eq!(report["dimension"], 2);
    assert_eq!(report["passed"], true);
    assert_eq!(report["sample_points"].as_array().unwrap().len(), 20);
    assert!(report["rel_errors"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e.as_f64().unwrap() <= 1e-6));

    // A second identical run reproduces the file byte for byte.
    assert!(sdt(&args).status.success());
    assert_eq!(fs::read_to_string(&path).unwrap(), first);
}

#[test]
fn verify_rejects_an_inadmissible_dimension() {
    let out = sdt(&[
        "verify",
        "--pair",
        "1.3",
        "--dim",
        "2",
        "--f",
        "exp_decay:1",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("does not admit dimension"));
}

#[test]
fn verify_all_rows_aggregates_reports() {
    let out = sdt(&[
        "verify",
        "--pair",
        "all",
        "--dim",
        "2,3",
        "--f",
        "exp_decay:1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(
        header,
        [
            "pair",
            "d",
            "original",
            "k",
            "t",
            "lhs",
            "rhs",
            "abs_error",
            "rel_error",
            "passed",
            "error"
        ]
    );
    // Rows 1.1 .. 2.4 in d = 2 and 3, minus row 1.3 in d = 2: 17 runs of 20 points.
    assert_eq!(rows.len(), 17 * 20);
    assert!(rows.iter().all(|r| r[9] == "true"));
}

#[test]
fn verify_reports_failure_through_the_exit_status() {
    let out = sdt(&[
        "verify",
        "--pair",
        "2.2",
        "--dim",
        "3",
        "--f",
        "exp_decay:1",
        "--tol",
        "1e-17",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
    let incompatible = sdt(&["verify", "--pair", "2.2", "--dim", "2", "--f", "unit"]);
    assert_eq!(incompatible.status.code(), Some(2));
}

#[test]
fn rte_tabulates_the_transfer_solution() {
    let out = sdt(&[
        "rte", "--c", "1", "--ell", "1", "--A0", "1", "--t", "1", "--r", "0.5,2",
    ]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["r", "t", "smooth", "ballistic_weight"]);
    assert!((number(&rows[0][2]) - 0.160_733_007_929_698).abs() < 1e-12);
    assert!((number(&rows[0][3]) - (-1.0f64).exp() / (2.0 * PI)).abs() < 1e-15);
    assert_eq!(number(&rows[1][2]), 0.0);
}

#[test]
fn rte_energy_companion_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("rte.csv");
    let out = sdt(&[
        "rte",
        "--c",
        "1",
        "--ell",
        "1",
        "--A0",
        "1",
        "--t",
        "0.5,1,2,5",
        "--r",
        "0.25",
        "--energy",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (_, main_rows) = csv_rows(&fs::read_to_string(&out_path).unwrap());
    assert_eq!(main_rows.len(), 4);
    let (header, rows) = csv_rows(&fs::read_to_string(dir.path().join("rte_energy.csv")).unwrap());
    assert_eq!(header, ["t", "energy"]);
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert!((number(&row[1]) - 1.0).abs() <= 1e-8);
    }
}

#[test]
fn rte_rejects_the_light_cone() {
    let out = sdt(&[
        "rte", "--c", "1", "--ell", "1", "--A0", "1", "--t", "1", "--r", "1",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("r = ct"));
    let bad = sdt(&[
        "rte", "--c", "0", "--ell", "1", "--A0", "1", "--t", "1", "--r", "0.5",
    ]);
    assert!(!bad.status.success());
}

#[test]
fn transform_examples() {
    let (header, rows) = csv_rows(&stdout(&sdt(&[
        "transform",
        "--direction",
        "forward",
        "--dim",
        "2",
        "--profile",
        "gaussian",
        "--x",
        "0,1",
    ])));
    assert_eq!(header, ["x", "value", "error_estimate", "converged"]);
    assert!((number(&rows[0][1]) - 2.0 * PI).abs() < 1e-12);
    assert!((number(&rows[1][1]) - 2.0 * PI * (-0.5f64).exp()).abs() < 1e-10);
    assert_eq!(rows[0][3], "true");

    let (_, rows) = csv_rows(&stdout(&sdt(&[
        "transform",
        "--direction",
        "inverse",
        "--dim",
        "3",
        "--profile",
        "yukawa-image",
        "--x",
        "1",
    ])));
    assert!((number(&rows[0][1]) - (-1.0f64).exp()).abs() < 1e-10);

    let zero = sdt(&[
        "transform",
        "--direction",
        "forward",
        "--dim",
        "0",
        "--profile",
        "gaussian",
        "--x",
        "0",
    ]);
    assert!(!zero.status.success());
    assert!(stderr(&zero).contains("dimension"));
    let unknown = sdt(&[
        "transform",
        "--direction",
        "forward",
        "--dim",
        "2",
        "--profile",
        "box",
        "--x",
        "0",
    ]);
    assert!(!unknown.status.success());
    let json = sdt(&[
        "transform",
        "--direction",
        "forward",
        "--dim",
        "2",
        "--profile",
        "gaussian",
        "--x",
        "0",
        "--format",
        "json-report",
    ]);
    assert!(!json.status.success());
}

#[test]
fn numbers_round_trip_through_the_csv() {
    let text = stdout(&sdt(&[
        "transform",
        "--direction",
        "forward",
        "--dim",
        "3",
        "--profile",
        "exponential",
        "--x",
        "0.1,0.7",
    ]));
    let (_, rows) = csv_rows(&text);
    for row in rows {
        let v = number(&row[1]);
        assert_eq!(format!("{v:?}"), row[1]);
    }
    assert!(text.ends_with('\n') && !text.contains('\r'));
}
