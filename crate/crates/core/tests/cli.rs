use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn blockfd(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockfd"))
        .args(args)
        .env("BLOCKFD_OUT_DIR", dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[test]
fn run_writes_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = blockfd(
        dir.path(),
        &["run", "--scheme", "block2", "--c", "-0.25", "--problem", "exp-cos", "--n", "64", "--t", "1"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("run_block2_c-0.25_n64.csv")).unwrap();
    assert!(csv.starts_with("# scheme=block2"));
    assert_eq!(data_rows(&csv).len(), 130);
    assert!(stdout(&o).contains("error="));
}

#[test]
fn unstable_parameter_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let o = blockfd(dir.path(), &["run", "--scheme", "block2", "--c", "0.6", "--n", "64"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("stable=false"));
}

#[test]
fn zero_time_returns_initial_data() {
    let dir = tempfile::tempdir().unwrap();
    let o = blockfd(dir.path(), &["run", "--scheme", "block3-high", "--c", "-0.385", "--n", "16", "--t", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("run_block3-high_c-0.385_n16.csv")).unwrap();
    for row in data_rows(&csv) {
        let f: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(f[1], f[2]);
        assert_eq!(f[1], f[0].cos().exp());
        assert_eq!(f[3], 0.0);
    }
}

#[test]
fn exit_codes_distinguish_failures() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(blockfd(dir.path(), &["run", "--scheme", "nope"]).status.code(), Some(2));
    assert_eq!(blockfd(dir.path(), &["figure", "7"]).status.code(), Some(2));
    assert_eq!(blockfd(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(blockfd(dir.path(), &["run", "--n", "31"]).status.code(), Some(3));
    assert_eq!(
        blockfd(dir.path(), &["run", "--filter", "local:4,4"]).status.code(),
        Some(3)
    );
    let file = dir.path().join("plain-file");
    fs::write(&file, "x").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_blockfd"))
        .args(["symbol", "--out-dir"])
        .arg(file.join("sub"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn symbol_scan_reports_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let o = blockfd(dir.path(), &["symbol", "--scheme", "block2", "--c", "0.3", "--n", "64"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("stable=true"));
    let csv = fs::read_to_string(dir.path().join("symbol_block2_c0.3_n64.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 65);

    let o = blockfd(dir.path(), &["symbol", "--scheme", "block3-high", "--c", "-0.385"]);
    assert!(stdout(&o).contains("stable=true"));

    // c = 0: the two branches are the classical symbol at ω and at its alias
    let o = blockfd(dir.path(), &["symbol", "--scheme", "block2", "--c", "0", "--n", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("symbol_block2_c0_n16.csv")).unwrap();
    let s = std::f64::consts::PI / 17.0;
    for row in csv.lines().skip(1) {
        let f: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
        let w = f[0];
        let nu = if w > 0.0 { w - 17.0 } else { w + 17.0 };
        let branch = |k: f64| -4.0 / (s * s) * (k * s / 2.0).sin().powi(2);
        assert!((f[1] - branch(w)).abs() < 1e-9 * (1.0 + branch(w).abs()));
        assert!((f[2] - branch(nu)).abs() < 1e-9 * branch(nu).abs());
    }
}

#[test]
fn cost_table_prints_every_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let o = blockfd(dir.path(), &["cost-table"]);
    let out = stdout(&o);
    let row = |label: &str| -> Vec<String> {
        let line = out.lines().find(|l| l.starts_with(label)).unwrap();
        line[label.len()..].split_whitespace().map(String::from).collect()
    };
    assert_eq!(row("standard 4th order"), ["0", "2", "4", "5"]);
    assert_eq!(row("3-point block 3rd order"), ["1.34", "1", "2", "2/3", "3", "2/3"]);
    assert_eq!(row("2-point block 3rd order"), ["-0.25", "1", "3", "4"]);
}

#[test]
fn figure_output_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["figure", "1b", "--ladder", "16,32,64", "--t", "0.1"];
    assert_eq!(blockfd(a.path(), &args).status.code(), Some(0));
    assert_eq!(blockfd(b.path(), &args).status.code(), Some(0));
    let mut names: Vec<String> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "fig1b_c-0.1667.csv",
            "fig1b_c-0.25.csv",
            "fig1b_c0.1667.csv",
            "fig1b_c0.csv",
            "fig1b_summary.csv"
        ]
    );
    for n in &names {
        assert_eq!(
            fs::read(a.path().join(n)).unwrap(),
            fs::read(b.path().join(n)).unwrap()
        );
    }
    let curve = fs::read_to_string(a.path().join("fig1b_c-0.25.csv")).unwrap();
    let lines: Vec<&str> = curve.lines().collect();
    assert_eq!(lines[0], "scheme,c,problem,integrator,t_final,safety,filter");
    assert_eq!(lines[2], "N,M,dt,error,log10M,log10error");
    assert_eq!(lines.len(), 6);
}

#[test]
fn filter_study_and_converge() {
    let dir = tempfile::tempdir().unwrap();
    let o = blockfd(dir.path(), &["filter-study", "--ladder", "16,32,64", "--t", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    for f in ["filter_block2_c-0.25.csv", "filter_block2_c-0.25_spectral.csv", "filter_block2_c-0.25_local.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let o = blockfd(
        dir.path(),
        &["converge", "--scheme", "std2", "--ladder", "16,32,64", "--t", "0.2", "--bound", "--filter", "spectral"],
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("bound_holds=true"), "{out}");
    assert!(dir.path().join("converge_std2_c0_spectral.csv").exists());
}

#[test]
fn complex_problem_csv_has_split_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested/mode.csv");
    let o = blockfd(
        dir.path(),
        &["run", "--problem", "mode:3", "--n", "16", "--t", "0.01", "--output", out.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(out).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("x,v_re,v_im"));
}
