//! End-to-end runs of the `p2c` binary.

use std::io::Write;
use std::process::{Command, Output};

use p2c::cli::{ClassifyReport, SweepCell};
use p2c::connection::{predict_bn, ConnectionReport};
use p2c::stokes_numeric::StokesData;

fn p2c(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_p2c")).args(args).output().expect("binary runs")
}

fn p2c_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_p2c")).args(args).env("P2C_THREADS", threads).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_kind(o: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).expect("error JSON on stderr");
    v["error"]["kind"].as_str().unwrap().to_string()
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes()).records().map(|r| r.unwrap()).collect()
}

#[test]
fn classify_trivial_and_oscillatory() {
    let o = p2c(&["classify", "--a", "0", "--b", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let r: ClassifyReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.schema_version, 1);
    let neg = r.sides.negative.as_ref().unwrap();
    let pos = r.sides.positive.as_ref().unwrap();
    assert_eq!(serde_json::to_value(neg.family).unwrap()["params"]["d"], 0.0);
    assert_eq!(serde_json::to_value(pos.family).unwrap()["params"]["kappa"], 0.0);

    let o = p2c(&["classify", "--a", "0", "--b", "0.5"]);
    let r: ClassifyReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.sides.negative.unwrap().family.name(), "N1");
}

#[test]
fn classify_rejects_reversed_span() {
    let o = p2c(&["classify", "--a", "0", "--b", "0", "--t-min", "5", "--t-max", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_kind(&o), "usage");
}

#[test]
fn predict_reports_and_degenerate_exit() {
    let o = p2c(&["predict", "--a", "1", "--b", "0"]);
    let r: ConnectionReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.scaled.xi, 1.0);
    assert_eq!(serde_json::to_value(r.scaled.case).unwrap(), "one");

    let o = p2c(&["predict", "--a", "0", "--b", "1"]);
    let r: ConnectionReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((r.predicted_stokes.s1.norm() - 1.0).abs() < 1e-12);

    let o = p2c(&["predict", "--a", "1", "--b", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_kind(&o), "domain");
}

#[test]
fn curves_case_one_increase() {
    let o = p2c(&["curves", "--case", "one", "--fixed-b", "0", "--n-max", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 5);
    let a: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(a.windows(2).all(|w| w[1] > w[0]), "{a:?}");
}

#[test]
fn curves_case_two_match_the_closed_form() {
    let o = p2c(&["curves", "--case", "two", "--fixed-a", "0", "--n-max", "5"]);
    let rows = csv_rows(&stdout(&o));
    for r in &rows {
        let n: u32 = r[0].parse().unwrap();
        let b: f64 = r[2].parse().unwrap();
        let closed = predict_bn(n).corollary;
        assert!((b - closed).abs() < 1e-8, "n = {n}: {b} vs {closed}");
    }
}

#[test]
fn curves_need_a_positive_count() {
    let o = p2c(&["curves", "--case", "one", "--n-max", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn full_precision_csv() {
    let o = p2c(&["curves", "--case", "one", "--fixed-b", "0", "--n-max", "1"]);
    let rows = csv_rows(&stdout(&o));
    let mantissa = rows[0][1].split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17);
}

#[test]
fn stokes_json_and_validation_table() {
    let o = p2c(&["stokes", "--a", "1.2", "--b", "0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let data: StokesData = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(data.constraint_residual < 1e-8);

    let o = p2c(&["stokes", "--a", "1.2", "--b", "0.3", "--validate"]);
    let text = stdout(&o);
    assert!(text.starts_with("xi,k,numeric_re,numeric_im,predicted_re,predicted_im,rel_err"));
    assert_eq!(csv_rows(&text).len(), 3);
}

#[test]
fn config_file_and_flag_precedence() {
    let mut cfg = tempfile::NamedTempFile::new().unwrap();
    writeln!(cfg, "# curves\nn-max = 3\nfixed-b = 0").unwrap();
    let path = cfg.path().to_str().unwrap();
    let o = p2c(&["curves", "--case", "one", "--config", path]);
    assert_eq!(csv_rows(&stdout(&o)).len(), 3);
    let o = p2c(&["curves", "--case", "one", "--config", path, "--n-max", "2"]);
    assert_eq!(csv_rows(&stdout(&o)).len(), 2);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = p2c(&["predict", "--a", "0", "--b", "1", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r: ConnectionReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.input, (0.0, 1.0));
}

fn sweep_cells(args: &[&str]) -> Vec<SweepCell> {
    let mut all = vec!["sweep", "--format", "json"];
    all.extend_from_slice(args);
    let o = p2c(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["schema_version"], 1);
    serde_json::from_value(doc["cells"].clone()).unwrap()
}

#[test]
fn sweep_near_small_slope_is_oscillatory() {
    let cells = sweep_cells(&[
        "--a-min", "-0.05", "--a-max", "0.05", "--b-min", "0.45", "--b-max", "0.55", "--na", "3", "--nb", "3",
        "--verify", "1",
    ]);
    assert_eq!(cells.len(), 9);
    for c in &cells {
        assert_eq!(c.measured.as_deref(), Some("N1"), "{c:?}");
    }
}

#[test]
fn sweep_labels_are_odd_symmetric() {
    let cells =
        sweep_cells(&["--a-min", "-2", "--a-max", "2", "--b-min", "-2", "--b-max", "2", "--na", "9", "--nb", "9"]);
    let at = |i: usize, j: usize| &cells[i * 9 + j];
    for i in 0..9 {
        for j in 0..9 {
            let (c, m) = (at(i, j), at(8 - i, 8 - j));
            assert_eq!((c.a, c.b), (-m.a, -m.b));
            assert_eq!(c.predicted, m.predicted, "({}, {})", c.a, c.b);
            assert_eq!(c.curve_index, m.curve_index, "({}, {})", c.a, c.b);
        }
    }
}

#[test]
fn sweep_curve_index_steps_across_the_first_curve() {
    let cells = sweep_cells(&[
        "--a-min", "1.1", "--a-max", "1.4", "--b-min", "-0.001", "--b-max", "0.001", "--na", "4", "--nb", "2",
    ]);
    let index: Vec<u32> = cells.iter().step_by(2).map(|c| c.curve_index.unwrap()).collect();
    // Gamma_1 crosses b = 0 at a = 1.2158.
    assert_eq!(index, vec![0, 0, 1, 1]);
}

#[test]
fn sweep_output_is_independent_of_thread_count() {
    let args = ["sweep", "--na", "15", "--nb", "15"];
    let one = p2c_env(&args, "1");
    let four = p2c_env(&args, "4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn sweep_budget_exit() {
    let o = p2c(&["sweep", "--na", "1001", "--nb", "1000"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(error_kind(&o), "budget");
}

#[test]
fn verify_subset() {
    let o = p2c(&["verify", "--only", "quadrature"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("criterion 1 [PASS]"));
    let o = p2c(&["verify", "--only", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_documents_precedence() {
    let o = p2c(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("command-line flags > config file > defaults"));
}
