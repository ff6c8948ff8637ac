//! Command-line behavior: golden outputs, exit codes and output files.
//! Set `UPDATE_GOLDEN=1` to rewrite the golden files after an intended change.

use std::path::{Path, PathBuf};

use cylindric::cli::{run, EXIT_BUDGET, EXIT_OK, EXIT_USAGE};

fn manifest_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn data(name: &str) -> String {
    manifest_path("tests/data").join(name).to_string_lossy().into_owned()
}

/// Runs the CLI in process and returns (exit code, stdout, stderr).
fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("cylindric").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn assert_golden(name: &str, actual: &str) {
    let path = manifest_path("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

fn golden(name: &str, args: &[&str]) {
    let (code, out, err) = cli(args);
    assert_eq!(code, EXIT_OK, "stderr: {err}");
    assert_golden(name, &out);
}

#[test]
fn axioms_golden() {
    golden("axioms_n2.txt", &["axioms"]);
    golden("axioms_n3_wca.txt", &["axioms", "--n", "3", "--variant", "wca"]);
}

#[test]
fn forms_golden() {
    golden("forms_n2_m1.txt", &["forms"]);
}

#[test]
fn split_golden() {
    golden("split_n2.txt", &["split", "--form", &data("atom_n2.json")]);
}

#[test]
fn report_golden() {
    golden("report_n3_degree0.txt", &["report", "--n", "3", "--degree", "0"]);
}

#[test]
fn witness_golden() {
    golden("witness_rep_n3.json", &["witness", "--n", "3", "--m", "0", "--form", &data("rep_n3.json")]);
}

#[test]
fn decide_prints_the_verdict() {
    assert_eq!(cli(&["decide", "x0 * d0 1", "d0 1 * x0"]).1, "equal\n");
    assert_eq!(cli(&["decide", "x0", "d0 1"]).1, "not equal\n");
    assert_eq!(cli(&["decide", "--forms", &data("unsat_n2.json")]).1, "zero\n");
    assert_eq!(cli(&["decide", "--forms", &data("atom_n2.json")]).1, "nonzero\n");
}

#[test]
fn asymmetric_diagonals_separate_the_variants() {
    let n3 = ["--n", "3", "--m", "0"];
    let decide = |variant| cli(&[&["decide", "--variant", variant], &n3[..], &["d0 1", "d0 1 * d1 0"]].concat()).1;
    assert_eq!(decide("nca"), "not equal\n");
    assert_eq!(decide("wca"), "equal\n");
    let (code, out, _) = cli(&[&["witness"], &n3[..], &["--form", &data("asym_n3.json")]].concat());
    assert_eq!(code, EXIT_OK);
    let record: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(record["support"], serde_json::json!(["g1", "g2"]));
}

#[test]
fn sat_reports_the_first_failure() {
    let (code, out, _) = cli(&["sat", "--form", &data("unsat_n2.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "unsatisfiable: AS2/C5 violation at root\n");
    assert_eq!(cli(&["sat", "--form", &data("atom_n2.json")]).1, "satisfiable\n");
}

#[test]
fn oracle_finds_or_bounds_models() {
    let (code, out, _) = cli(&["oracle", "--form", &data("atom_n2.json"), "--max-nodes", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("satisfiable: realized at s"), "{out}");
    let (_, out, _) = cli(&["oracle", "--form", &data("unsat_n2.json"), "--max-nodes", "3"]);
    assert_eq!(out, "no model with at most 3 nodes\n");
    let (code, _, err) = cli(&["oracle", "--m", "5", "--form", &data("atom_n2.json"), "--max-nodes", "6"]);
    assert_eq!((code, err.contains("valuations")), (EXIT_BUDGET, true));
}

#[test]
fn budget_exhaustion_exits_2() {
    let (code, out, err) = cli(&["rewrite", "c0(x0)"]);
    assert_eq!(code, EXIT_BUDGET);
    assert!(out.is_empty());
    assert_eq!(err, "error: budget exceeded: rewriting requires |F_1| = 2^5·2^64 forms, budget is 1000000\n");
    assert_eq!(cli(&["forms", "--budget", "10"]).0, EXIT_BUDGET);
}

#[test]
fn usage_and_validation_errors_exit_1() {
    assert_eq!(cli(&[]).0, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(cli(&["forms", "--n", "1"]).0, EXIT_USAGE);
    assert_eq!(cli(&["forms", "--variant", "ca"]).0, EXIT_USAGE);
    assert_eq!(cli(&["decide", "x0"]).0, EXIT_USAGE);
    assert_eq!(cli(&["decide", "x0 +", "x0"]).0, EXIT_USAGE);
    assert_eq!(cli(&["decide", "x3", "x0"]).0, EXIT_USAGE);
    assert_eq!(cli(&["sat", "--form", "/nonexistent/form.json"]).0, EXIT_USAGE);
    // d_2_2 does not exist for n = 2
    assert_eq!(cli(&["sat", "--n", "2", "--m", "0", "--form", &data("rep_n3.json")]).0, EXIT_USAGE);
    // x_0 does not exist for m = 0
    assert_eq!(cli(&["sat", "--m", "0", "--form", &data("atom_n2.json")]).0, EXIT_USAGE);
    // splitting needs a satisfiable form
    let (code, _, err) = cli(&["split", "--form", &data("unsat_n2.json")]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error: "), "{err}");
}

#[test]
fn help_and_version_exit_0() {
    let (code, _, err) = cli(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for command in ["forms", "sat", "witness", "rewrite", "decide", "split", "report", "axioms", "oracle"] {
        assert!(err.contains(command), "help lacks {command}");
    }
    assert_eq!(cli(&["--version"]).0, EXIT_OK);
}

#[test]
fn out_and_dot_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("split.json");
    let dot = dir.path().join("split.dot");
    let (code, _, err) = cli(&[
        "split",
        "--form",
        &data("atom_n2.json"),
        "--out",
        json.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let record: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    for key in ["tau", "sigma", "gamma"] {
        assert!(record.get(key).is_some(), "split record lacks {key}");
    }
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("graph "));

    let forms = dir.path().join("forms.json");
    cli(&["forms", "--out", forms.to_str().unwrap()]);
    let (code, out, _) = cli(&["decide", "--forms", forms.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "nonzero\n"));

    let witness_dot = dir.path().join("w.dot");
    cli(&["sat", "--n", "3", "--m", "0", "--form", &data("rep_n3.json"), "--dot", witness_dot.to_str().unwrap()]);
    assert!(std::fs::read_to_string(&witness_dot).unwrap().contains("S_-1"));
}
