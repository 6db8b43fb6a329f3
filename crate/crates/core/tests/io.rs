mod common;

use std::fs;

use lp_monotone::harness::{example_config, execute, RunConfig, SolverKind};
use lp_monotone::io::{
    export_csv, export_json, export_loglog, load_json, read_csv, read_kernel_csv, read_samples_csv,
    suffixed_path, to_json, CSV_HEADER, SCHEMA_VERSION,
};
use lp_monotone::Error;

fn short_run(steps: usize) -> lp_monotone::io::RunRecord {
    let mut c = example_config(1).unwrap();
    c.max_iter = steps;
    execute(&c).unwrap()
}

#[test]
fn three_step_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.csv");
    let rec = short_run(3);
    export_csv(&rec, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER.join(","));
    let data: Vec<&str> = lines[1..]
        .iter()
        .copied()
        .filter(|l| !l.starts_with('#'))
        .collect();
    assert_eq!(data.len(), 3);
    assert!(lines[4..].iter().all(|l| l.starts_with('#')));
    assert!(text.contains("# nfe=3"));
    // Single-operator runs leave the q residual blank.
    assert!(data.iter().all(|l| l.split(',').nth(2) == Some("")));
    assert!(!text.contains(';'));
}

#[test]
fn csv_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.csv");
    let rec = execute(&example_config(1).unwrap()).unwrap();
    export_csv(&rec, &path).unwrap();
    let rows = read_csv(&path).unwrap();
    assert_eq!(rows.len(), rec.trace.rows.len());
    for (a, b) in rows.iter().zip(&rec.trace.rows) {
        assert_eq!(a.n, b.n);
        assert_eq!(a.residual_p.to_bits(), b.residual.to_bits());
        assert_eq!(a.iterate_norm.to_bits(), b.iterate_norm.to_bits());
        assert_eq!(
            a.phi_to_target.map(f64::to_bits),
            b.phi_to_target.map(f64::to_bits)
        );
        assert_eq!(a.elapsed_s.to_bits(), b.elapsed.to_bits());
        assert_eq!(a.residual_q, None);
    }
}

#[test]
fn hammerstein_csv_has_both_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ham.csv");
    let mut c = example_config(3).unwrap();
    c.tol = 1e-3;
    let rec = execute(&c).unwrap();
    export_csv(&rec, &path).unwrap();
    let rows = read_csv(&path).unwrap();
    assert!(rows
        .iter()
        .all(|r| r.residual_q.is_some() && r.phi_to_target.is_some()));
    let last = rows.last().unwrap();
    assert!(last.residual_p < 1e-3 && last.residual_q.unwrap() < 1e-3);
}

#[test]
fn loglog_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.dat");
    let rec = execute(&example_config(1).unwrap()).unwrap();
    let report = export_loglog(&rec, &path).unwrap();
    assert_eq!(report.dropped, 0);
    let pairs: Vec<(usize, f64)> = fs::read_to_string(&path)
        .unwrap()
        .lines()
        .map(|l| {
            let mut it = l.split_whitespace();
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(pairs.len(), report.written);
    assert!(pairs.iter().all(|&(_, r)| r > 0.0));
    assert!(pairs.last().unwrap().1 < 1e-6);
    assert_eq!(pairs[0].0, 2);
}

#[test]
fn loglog_of_all_zero_residuals_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.dat");
    let mut c = RunConfig::new(SolverKind::Zero, "mult", "zero");
    c.max_iter = 4;
    let rec = execute(&c).unwrap();
    assert!(rec.trace.rows.iter().all(|r| r.residual == 0.0));
    match export_loglog(&rec, &path) {
        Err(Error::EmptyPlot { dropped }) => assert_eq!(dropped, rec.trace.rows.len()),
        other => panic!("expected an empty-plot error, got {other:?}"),
    }
    assert!(!path.exists());
}

#[test]
fn json_document_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let rec = short_run(2);
    export_json(&rec, &path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["schema"], SCHEMA_VERSION);
    for key in ["config", "summary", "trace"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert!(doc["summary"]["nfe"].is_number());
    assert!(doc["trace"]["rows"][0]["residual"].is_number());
    assert_eq!(to_json(&rec), doc);
}

#[test]
fn json_reload_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let mut c = example_config(2).unwrap();
    c.init = "cos-exp".into();
    let rec = execute(&c).unwrap();
    export_json(&rec, &path).unwrap();
    let loaded = load_json(&path).unwrap();
    assert_eq!(loaded.config, rec.config);
    assert_eq!(loaded.trace.rows.len(), rec.trace.rows.len());
    let again = execute(&loaded.config).unwrap();
    assert_eq!(again.summary.nfe, rec.summary.nfe);
    assert_eq!(
        again.summary.final_residual.to_bits(),
        rec.summary.final_residual.to_bits()
    );
}

#[test]
fn json_with_foreign_schema_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let mut doc = to_json(&short_run(2));
    doc["schema"] = 7.into();
    fs::write(&path, doc.to_string()).unwrap();
    assert!(matches!(load_json(&path), Err(Error::Parse { .. })));
}

#[test]
fn io_errors_carry_the_path() {
    let missing = std::path::Path::new("/nonexistent/dir/run.csv");
    let err = export_csv(&short_run(1), missing).unwrap_err();
    assert!(
        err.to_string().contains("/nonexistent/dir/run.csv"),
        "{err}"
    );
}

#[test]
fn sample_and_kernel_ingestion() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("x.csv");
    fs::write(&samples, "# t, value\n0.0, 1.0\n0.5, 2.0\n1.0, 3.0\n").unwrap();
    assert_eq!(read_samples_csv(&samples).unwrap(), [1.0, 2.0, 3.0]);

    let kernel = dir.path().join("k.csv");
    fs::write(&kernel, "1,0,0\n0,1,0\n0,0,1\n").unwrap();
    assert_eq!(read_kernel_csv(&kernel).unwrap().len(), 3);

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "1,x\n").unwrap();
    assert!(matches!(read_samples_csv(&bad), Err(Error::Parse { .. })));
}

#[test]
fn ladder_paths_are_distinct() {
    let base = std::path::Path::new("out/run.csv");
    assert_eq!(
        suffixed_path(base, "tol1e-3"),
        std::path::Path::new("out/run-tol1e-3.csv")
    );
    assert_ne!(
        suffixed_path(base, "tol1e-3"),
        suffixed_path(base, "tol1e-6")
    );
}
