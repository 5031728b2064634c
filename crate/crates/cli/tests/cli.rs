use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sigforge_cli::{exit, Grid, ResultRecord};
use sigforge_core::freegroup::fox_table;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigforge"))
        .args(args)
        .env_remove("SIGFORGE_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--json", "--no-timestamp"]);
    let out = run(&all);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn signature_of_family_matrices() {
    let c = json(&["sig", "--family", "C", "--m", "1", "--n", "3", "--N", "4", "--omega", "zeta(2)"]);
    assert_eq!(c["outputs"]["signature"], 8);
    let a = json(&["sig", "--family", "A", "--N", "3"]);
    assert_eq!(a["outputs"]["signature"], 3);
}

#[test]
fn signature_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "zero4.json", "[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]");
    let out = json(&["sig", "--file", &zero]);
    let o = &out["outputs"];
    assert_eq!((o["n_plus"].clone(), o["n_minus"].clone(), o["n_zero"].clone()), (0.into(), 0.into(), 4.into()));
    let complex = write(
        dir.path(),
        "h.json",
        r#"[[1, "zeta(4)"], ["zeta(4)^3", 1]]"#,
    );
    // det = 1 - |i|^2 = 0, trace 2
    let o = json(&["sig", "--file", &complex])["outputs"].clone();
    assert_eq!((o["n_plus"].clone(), o["n_zero"].clone()), (1.into(), 1.into()));
}

#[test]
fn rho_subcommands() {
    let k1 = json(&["rho", "twist", "--m", "3", "--n", "5", "--N0", "2", "--k", "1"]);
    assert_eq!(k1["outputs"]["rho"], -2);
    let k2 = json(&["rho", "twist", "--m", "3", "--n", "5", "--N0", "2", "--k", "2"]);
    assert_eq!(k2["outputs"]["rho"], -10);
    let direct = json(&["rho", "twist", "--m", "3", "--n", "5", "--N", "4", "--omega", "zeta(16)"]);
    assert_eq!(direct["outputs"]["rho"], -10);
    assert_eq!(json(&["rho", "dehn", "--M", "5"])["outputs"]["rho"], -1);
    assert_eq!(json(&["rho", "dehn", "--M", "-5"])["outputs"]["rho"], 1);
    let knot = json(&["rho", "knot-rho0", "--knot", "trefoil_right"]);
    assert_eq!(knot["outputs"]["rho0"], "-4/3");
}

#[test]
fn knot_and_cylinder_files() {
    let dir = tempfile::tempdir().unwrap();
    let fig8 = write(dir.path(), "v.json", "[[-1,1],[0,1]]");
    assert_eq!(json(&["rho", "knot-rho0", "--file", &fig8])["outputs"]["rho0"], "0");
    let script = write(
        dir.path(),
        "s.json",
        r#"{"genus": 2, "records": [
            {"depth": 2, "knot": "trefoil_right"},
            {"depth": 4, "knot": [[1,0],[-1,1]], "copies": 3}
        ]}"#,
    );
    let at3 = json(&["rho", "cylinder", "--script", &script, "--index", "3"]);
    assert_eq!(at3["outputs"]["rho"], "-4/3");
    let at4 = json(&["rho", "cylinder", "--script", &script, "--index", "4"]);
    assert_eq!(at4["outputs"]["rho"], "8/3");
    assert_eq!(at4["outputs"]["ledger"]["4"], "4");
}

#[test]
fn certificates() {
    let scan = json(&["certify", "defect-bound", "--m", "1", "--n", "3", "--omega", "zeta(8)", "--max", "40"]);
    assert!(scan["outputs"]["max_abs_defect"].as_i64().unwrap() <= 8);
    assert_eq!(scan["outputs"]["within_bound"], true);
    assert_eq!(scan["outputs"]["cells"].as_array().unwrap().len(), 1600);

    let w = json(&["certify", "independence", "--ks", "1,2", "--coeffs", "1,-1", "--bound", "100"]);
    assert_eq!(w["outputs"]["N0"], 26);
    assert_eq!(w["outputs"]["combination"], "104");

    let s = json(&["certify", "independence", "--depths", "2,5", "--coeffs", "1,1/2", "--bound", "10"]);
    let combination: String = serde_json::from_value(s["outputs"]["combination"].clone()).unwrap();
    let value = sigforge_core::cyclo::parse_rational_literal(&combination).unwrap();
    assert!(value.numer().magnitude() > &(value.denom().magnitude() * 10u32));

    let d = json(&["certify", "density", "--target", "-8/3", "--tolerance", "1/100", "--depth", "3"]);
    assert_eq!(d["outputs"]["achieved"], "-8/3");
}

#[test]
fn fox_table_matches_library() {
    for (m, n) in [(1u32, 0u32), (3, 5)] {
        let (ms, ns) = (m.to_string(), n.to_string());
        let out = json(&["certify", "fox-table", "--m", &ms, "--n", &ns]);
        let entries = out["outputs"]["entries"].as_array().unwrap().clone();
        let expected = fox_table(m, n);
        assert_eq!(entries.len(), 8);
        for (got, want) in entries.iter().zip(&expected) {
            assert_eq!(got["curve"], want.curve);
            assert_eq!(got["derivative"], want.derivative.to_string());
        }
    }
    let out = json(&["fox", "--word", "z^-1 [z,w] z"]);
    assert_eq!(out["outputs"]["reduced"], "w z^-1 w^-1 z");
}

#[test]
fn csv_lists_grid_rows() {
    let out = run(&["certify", "defect-bound", "--m", "1", "--n", "3", "--omega", "zeta(2)", "--max", "5", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a,b,defect");
    assert_eq!(lines.len(), 1 + 25);
}

#[test]
fn output_is_deterministic() {
    let args = ["certify", "fox-table", "--m", "3", "--n", "5", "--json", "--no-timestamp"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let stamped = json(&["rho", "dehn", "--M", "2"]);
    assert!(stamped.get("timestamp").is_none());
    let with_time: Value = serde_json::from_slice(&run(&["rho", "dehn", "--M", "2", "--json"]).stdout).unwrap();
    assert!(with_time["timestamp"].is_string());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&["rho", "dehn", "--M", "1"]), exit::OK);
    assert_eq!(code(&["sig", "--file", "/nonexistent/m.json"]), exit::IO);
    assert_eq!(code(&["sig"]), exit::USAGE);
    assert_eq!(code(&["rho", "twist", "--m", "1"]), exit::USAGE);
    let bad = write(dir.path(), "bad.json", "[[1, 2], [3");
    assert_eq!(code(&["sig", "--file", &bad]), exit::MALFORMED);
    let non_hermitian = write(dir.path(), "nh.json", "[[1, 2], [3, 4]]");
    assert_eq!(code(&["sig", "--file", &non_hermitian]), exit::MALFORMED);
    assert_eq!(code(&["sig", "--family", "C", "--m", "1", "--n", "3", "--N", "2", "--omega", "zeta(1)"]), exit::TRIVIAL_CHARACTER);
    assert_eq!(code(&["rho", "twist", "--m", "1", "--n", "3", "--N", "2", "--k", "0"]), exit::TRIVIAL_CHARACTER);
    let shallow = write(dir.path(), "s.json", r#"{"genus": 2, "records": [{"depth": 1, "knot": "figure8"}]}"#);
    assert_eq!(code(&["rho", "cylinder", "--script", &shallow, "--index", "3"]), exit::DEPTH_TOO_SMALL);
    let empty = write(dir.path(), "e.json", r#"{"genus": 2, "records": []}"#);
    assert_eq!(code(&["rho", "cylinder", "--script", &empty, "--index", "1"]), exit::DEPTH_TOO_SMALL);
    assert_eq!(code(&["certify", "density", "--target", "1/2", "--tolerance", "1/6"]), exit::INSUFFICIENT_BASIS);
    let irrational = write(dir.path(), "k.json", "[[-1,1],[0,-2]]");
    assert_eq!(code(&["rho", "knot-rho0", "--file", &irrational]), exit::NON_CYCLOTOMIC_JUMP);
    assert_eq!(code(&["certify", "independence", "--ks", "2,1", "--coeffs", "1,1", "--bound", "5"]), exit::INVALID_PARAMETER);
}

#[test]
fn precision_variable() {
    let ok = Command::new(env!("CARGO_BIN_EXE_sigforge"))
        .args(["sig", "--family", "C", "--m", "1", "--n", "3", "--N", "4", "--omega", "zeta(7)", "--json", "--no-timestamp"])
        .env("SIGFORGE_PRECISION_BITS", "16")
        .output()
        .unwrap();
    assert!(ok.status.success());
    let reference = json(&["sig", "--family", "C", "--m", "1", "--n", "3", "--N", "4", "--omega", "zeta(7)"]);
    assert_eq!(serde_json::from_slice::<Value>(&ok.stdout).unwrap(), reference);
    let bad = Command::new(env!("CARGO_BIN_EXE_sigforge"))
        .args(["rho", "dehn", "--M", "1"])
        .env("SIGFORGE_PRECISION_BITS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(exit::MALFORMED));
}

#[test]
fn record_round_trip() {
    let rec = ResultRecord::new("rho knot-rho0", "circle average")
        .input("knot", "trefoil_right")
        .output("rho0", "-4/3")
        .output("arcs", vec![1, 2, 3])
        .with_grid(Grid::default())
        .stamped();
    let text = serde_json::to_string(&rec).unwrap();
    let back: ResultRecord = serde_json::from_str(&text).unwrap();
    assert_eq!(back.grid, None);
    assert_eq!(back, ResultRecord { grid: None, ..rec });
    let emitted = json(&["rho", "knot-rho0", "--knot", "figure8"]);
    let parsed: ResultRecord = serde_json::from_value(emitted.clone()).unwrap();
    assert_eq!(serde_json::to_value(&parsed).unwrap(), emitted);
}
