use bn2::cli::run_with;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("bn2").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn solve_prints_the_genus_six_table() {
    let (code, out, _) = run(&["solve", "--k", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 25);
    assert!(lines.contains(&"k1^2 41/144"));
    assert!(lines.contains(&"d(1,4) 3251/360"));
    assert!(lines.contains(&"th(2) -2"));
}

#[test]
fn solve_json_and_csv() {
    let (code, out, _) = run(&["solve", "--k", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["coefficients"]["k2"], "-4");
    let (_, out, _) = run(&["solve", "--k", "3", "--format", "csv"]);
    assert!(out.starts_with("label,coefficient\n"));
    assert!(out.contains("\"d(0,0)\",1\n"));
}

#[test]
fn verify_all_passes() {
    let (code, out, _) = run(&["verify", "all", "--k-max", "6"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "pass");
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["check"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    for c in v["checks"].as_array().unwrap() {
        for key in ["check", "status", "expected", "actual", "diff"] {
            assert!(c.get(key).is_some(), "{key} missing in {}", c["check"]);
        }
    }
    assert!(names.contains(&"m4") && names.contains(&"g5") && names.contains(&"closed-form(k=6)"));
}

#[test]
fn verify_single_checks() {
    for check in ["m4", "g5", "trigonal"] {
        let (code, out, _) = run(&["verify", check]);
        assert_eq!(code, 0, "{check}");
        assert!(out.contains("\"status\": \"pass\""));
    }
    let (code, out, _) = run(&["verify", "g5"]);
    assert_eq!(code, 0);
    assert!(out.contains("ld2"), "convention should be named");
    let (code, _, _) = run(&["verify", "pullback", "--k", "4"]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["verify", "nonsingular", "--g", "9"]);
    assert_eq!(code, 0);
}

#[test]
fn matrix_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q6.csv");
    let (code, out, _) = run(&["matrix", "--g", "6", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rd.headers().unwrap().len(), 27);
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r.len() == 27));
    assert_eq!(&rows[0][26], "TOverNorm(2)");
}

#[test]
fn outputs_are_byte_identical() {
    for args in [
        vec!["matrix", "--g", "7", "--format", "json"],
        vec!["matrix", "--g", "6", "--k", "3"],
        vec!["tmatrix", "--g", "8"],
        vec!["verify", "all", "--k-max", "4"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a, b, "{args:?}");
        assert!(!a.1.contains('\r'));
    }
}

#[test]
fn counts() {
    assert_eq!(run(&["counts", "n", "--g", "4", "--d", "3", "--alpha", "0,1"]).1, "24\n");
    assert_eq!(run(&["counts", "m", "--g", "4", "--d", "3", "--alpha", "0,1"]).1, "264\n");
    assert_eq!(run(&["counts", "ell", "--g", "4", "--k", "3"]).1, "6\n");
    assert_eq!(
        run(&["counts", "castelnuovo", "--g", "2", "--d", "3", "--alpha", "1,2", "--beta", "0,1"]).1,
        "5/12\n"
    );
    assert_eq!(run(&["counts", "T", "--i", "2", "--g", "6", "--k", "3"]).1, "144\n");
    assert_eq!(run(&["counts", "D", "--i", "2", "--j", "3", "--g", "6", "--k", "3"]).1, "144\n");
    assert_eq!(run(&["counts", "s16", "--i", "3", "--g", "6", "--k", "3"]).1, "192\n");
}

#[test]
fn basis_listing() {
    let (code, out, _) = run(&["basis", "--g", "7"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 32);
    let (_, out, _) = run(&["basis", "--g", "6", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dimension"], 25);
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = run(&["counts", "n", "--g", "4"]);
    assert_eq!(code, 2);
    assert!(err.contains("--d"));
    let (code, _, err) = run(&["counts", "n", "--g", "4", "--d", "3", "--alpha", "x"]);
    assert_eq!(code, 2);
    assert!(err.contains("--alpha"));
    assert_eq!(run(&["nonsense"]).0, 2);
    assert_eq!(run(&["solve", "--k", "2"]).0, 2);
    assert_eq!(run(&["matrix", "--g", "4"]).0, 2);
    assert_eq!(run(&["matrix", "--g", "6", "--format", "xml"]).0, 2);
    // wrong adjusted rho is an input error
    assert_eq!(run(&["counts", "n", "--g", "4", "--d", "3", "--alpha", "0,0"]).0, 2);
    assert_eq!(run(&["counts", "ell", "--g", "5", "--k", "3"]).0, 2);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_bn2");
    let ok = std::process::Command::new(bin).args(["verify", "m4"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = std::process::Command::new(bin).args(["solve"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("--k"));
}
