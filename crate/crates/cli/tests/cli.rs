//! End-to-end behaviour of the `sglv` binary.

use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output};

fn sglv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sglv")).args(args).output().unwrap()
}

fn json(out: &Output) -> Vec<Value> {
    serde_json::from_slice::<Value>(&out.stdout).unwrap().as_array().unwrap().clone()
}

fn config(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".cfg").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn axioms_pass_on_example() {
    let out = sglv(&["run", "--entry", "example_3_2", "--suite", "axioms", "--samples", "100", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rs = json(&out);
    assert!(rs.len() > 30);
    let keys = ["check_id", "paper_ref", "samples_used", "max_residual", "mean_residual", "tol", "pass", "notes"];
    for r in &rs {
        let obj = r.as_object().unwrap();
        assert_eq!(obj.len(), keys.len());
        assert!(keys.iter().all(|k| obj.contains_key(*k)), "{r}");
        assert_eq!(r["pass"], Value::Bool(true), "{r}");
    }
}

#[test]
fn null_line_frames_report_rank_one() {
    let out = sglv(&["run", "--entry", "null_line", "--suite", "frames", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rs = json(&out);
    let rank = rs.iter().find(|r| r["check_id"] == "frame.radical_rank_constant").unwrap();
    assert!(rank["notes"].as_str().unwrap().starts_with("r = 1"), "{rank}");
    // no contact structure: contact-dependent checks appear as skipped, not absent
    let eta = rs.iter().find(|r| r["check_id"] == "induced.torsion").unwrap();
    assert!(eta["notes"].as_str().unwrap().contains("skipped"), "{eta}");
}

#[test]
fn basis_order_mapping_fails_sgl() {
    let out = sglv(&["run", "--entry", "example_3_2", "--mapping", "basis_order", "--suite", "sgl", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let rs = json(&out);
    let inv = rs.iter().find(|r| r["check_id"] == "sgl.radical_invariant").unwrap();
    assert_eq!(inv["pass"], Value::Bool(false));
}

#[test]
fn text_table_marks_results() {
    let out = sglv(&["run", "--entry", "example_3_2", "--suite", "frames", "--samples", "5", "--format", "text"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("status"));
    assert!(lines.iter().any(|l| l.starts_with("FAIL   screen.nabla_rad")));
    assert!(lines.iter().any(|l| l.starts_with("info   ")) || lines.iter().any(|l| l.contains("informational")));
    assert!(lines.iter().any(|l| l.starts_with("PASS   frame.pairing")));
    assert!(lines.last().unwrap().ends_with("3 failing"));
    // aligned: the max column starts at the same offset on every row
    let col = |l: &str| l.find(|c: char| c.is_ascii_digit()).unwrap();
    let rows: Vec<&&str> = lines[1..lines.len() - 1].iter().collect();
    let w = rows.iter().map(|l| l.split_whitespace().nth(1).unwrap().len()).max().unwrap();
    assert!(rows.iter().all(|l| col(l) >= 7 + w));
}

#[test]
fn tolerance_flags_reach_reports() {
    let out = sglv(&[
        "run", "--entry", "null_line", "--suite", "frames", "--samples", "3", "--format", "json", "--tol", "1e-5",
        "--tol-override", "frame.pairing=0.5",
    ]);
    let rs = json(&out);
    let tol = |id: &str| rs.iter().find(|r| r["check_id"] == id).unwrap()["tol"].as_f64().unwrap();
    assert_eq!(tol("frame.pairing"), 0.5);
    assert_eq!(tol("frame.screen_orthogonal"), 1e-5);
    assert_eq!(tol("frame.radical_null"), 1e-8);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let args = ["run", "--entry", "geodesic_subspace", "--samples", "4", "--format", "json"];
    let direct = sglv(&args);
    let out = sglv(&[&args[..], &["--output", path.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), direct.status.code());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn custom_config_runs() {
    let f = config("# a null line in R^5 of index 2\nambient 2 1 0.3\nparams 1\ncomponent_1 = u1\ncomponent_2 = u1\n");
    let out = sglv(&["run", "--config", f.path().to_str().unwrap(), "--suite", "frames,sgl", "--format", "json"]);
    // frames hold; the line is not SGL (φξ is not tangent), so the SGL suite fails
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let rs = json(&out);
    for r in rs.iter().filter(|r| r["check_id"].as_str().unwrap().starts_with("frame.")) {
        assert_eq!(r["pass"], Value::Bool(true), "{r}");
    }
    let class = rs.iter().find(|r| r["check_id"] == "sgl.classification").unwrap();
    let notes = class["notes"].as_str().unwrap();
    assert!(notes.contains("sgl = false") && notes.contains("r = 1"), "{class}");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["run", "--entry", "nope"][..],
        &["run", "--entry", "null_line", "--suite", "bogus"],
        &["run", "--entry", "null_line", "--samples", "0"],
        &["run", "--entry", "null_line", "--tol", "-1"],
        &["run", "--entry", "null_line", "--tol-override", "frame.pairing"],
        &["run", "--entry", "null_line", "--mapping", "diagonal"],
        &["run"],
        &["frobnicate"],
    ] {
        let out = sglv(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
    let bad = config("ambient 2 1 0.3\nparams 1\ncomponent_1 = u1 +\n");
    assert_eq!(sglv(&["run", "--config", bad.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn structural_failures_exit_3() {
    // tangent (1, 1 − u²) is null only at u = 0, the reference point
    let unstable = config("ambient 2 1 0.3\nparams 1\ncomponent_1 = u1\ncomponent_2 = u1 - u1*u1*u1/3\n");
    let out = sglv(&["run", "--config", unstable.path().to_str().unwrap(), "--suite", "frames"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("radical rank not constant"));
    let flat = config("ambient 2 1 0.3\nparams 1\ncomponent_1 = 1\n");
    assert_eq!(sglv(&["run", "--config", flat.path().to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn io_errors_exit_4() {
    let out = sglv(&["run", "--entry", "null_line", "--output", "/nonexistent-dir/r.json"]);
    assert_eq!(out.status.code(), Some(4));
    let out = sglv(&["run", "--config", "/nonexistent-dir/x.cfg"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn deterministic_across_threads() {
    let run = |t: &str| sglv(&["run", "--entry", "invariant_plane", "--samples", "12", "--seed", "7", "--format", "json", "--threads", t]).stdout;
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("3"));
    assert_ne!(one, sglv(&["run", "--entry", "invariant_plane", "--samples", "12", "--seed", "8", "--format", "json"]).stdout);
}
