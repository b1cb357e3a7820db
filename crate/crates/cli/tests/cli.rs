use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn csl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csl"))
        .args(args)
        .env_remove("CSL_CAPACITY")
        .output()
        .expect("run csl")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn finite(colors: &[&[i64]]) -> Value {
    let colors: Vec<Value> = colors
        .iter()
        .map(|c| json!({"kind": "finite", "elements": c}))
        .collect();
    json!({"ambient": {"free_rank": 1, "torsion": []}, "colors": colors})
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn sumset_of_a_finite_tuple() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.json", &finite(&[&[0, 1]]));
    let out = csl(&["sumset", "--input", s(&input), "--h", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out), json!([0, 1, 2, 3]));
}

#[test]
fn sumset_writes_to_output_file() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.json", &finite(&[&[0, 2], &[0, 3]]));
    let output = dir.path().join("out.json");
    let out = csl(&[
        "sumset",
        "--input",
        s(&input),
        "--h",
        "1,1",
        "--output",
        s(&output),
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(output).unwrap()).unwrap();
    assert_eq!(v, json!([0, 2, 3, 5]));
}

#[test]
fn sumset_usage_errors() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.json", &finite(&[&[0, 1]]));
    assert_eq!(code(&csl(&["sumset", "--input", s(&input)])), 2);
    assert_eq!(
        code(&csl(&["sumset", "--input", s(&input), "--h", "1,2"])),
        2
    );
    assert_eq!(code(&csl(&["sumset", "--input", s(&input), "--h", "x"])), 2);
    let garbage = dir.path().join("bad.json");
    fs::write(&garbage, "{not json").unwrap();
    assert_eq!(
        code(&csl(&["sumset", "--input", s(&garbage), "--h", "1"])),
        2
    );
    let bad_kind = write(
        &dir,
        "kind.json",
        &json!({"ambient": {"free_rank": 1}, "colors": [{"kind": "blob"}]}),
    );
    assert_eq!(
        code(&csl(&["sumset", "--input", s(&bad_kind), "--h", "1"])),
        2
    );
}

#[test]
fn structured_sumset_needs_a_window() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "m.json",
        &json!({"ambient": {"free_rank": 1}, "colors": [{"kind": "translated_monoid", "base": 2, "monoid": [3, 5]}]}),
    );
    assert_eq!(code(&csl(&["sumset", "--input", s(&input), "--h", "2"])), 3);
    let out = csl(&[
        "sumset",
        "--input",
        s(&input),
        "--h",
        "2",
        "--window",
        "0:14",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out), json!([4, 7, 9, 10, 12, 13, 14]));
}

#[test]
fn verified_finite_cover() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.json", &finite(&[&[0, 1]]));
    let out = csl(&[
        "cover",
        "--input",
        s(&input),
        "--r",
        "2",
        "--h",
        "3",
        "--verify",
    ]);
    assert_eq!(code(&out), 0);
    let cert = stdout_json(&out);
    assert_eq!(cert["status"], json!("verified"));
    assert_eq!(cert["method"], json!("finite"));
    assert_eq!(cert["X"], json!([-3, 0, 3]));
    assert_eq!(cert["bound"], json!(3));
}

#[test]
fn cover_without_verify_is_unverified() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.json", &finite(&[&[0, 1, 3], &[0, 2]]));
    let out = csl(&["cover", "--input", s(&input), "--r", "2", "--h", "2,2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["status"], json!("unverified"));
}

#[test]
fn certificates_round_trip_through_verify() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.json", &finite(&[&[0, 1, 3], &[-1, 2]]));
    let cert = dir.path().join("cert.json");
    let out = csl(&[
        "cover",
        "--input",
        s(&input),
        "--r",
        "3",
        "--h",
        "2,1",
        "--verify",
        "--output",
        s(&cert),
    ]);
    assert_eq!(code(&out), 0);
    let again = csl(&["verify", "--input", s(&cert)]);
    assert_eq!(code(&again), 0);
    let mut v = stdout_json(&again);
    assert_eq!(v["report"]["passed"], json!(true));
    v.as_object_mut().unwrap().remove("report");
    let original: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v, original);
}

#[test]
fn tampered_certificate_fails_verification() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.json", &finite(&[&[0, 1]]));
    let cert = dir.path().join("cert.json");
    csl(&[
        "cover",
        "--input",
        s(&input),
        "--r",
        "2",
        "--h",
        "3",
        "--output",
        s(&cert),
    ]);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    v["X"] = json!([0]);
    let tampered = write(&dir, "bad.json", &v);
    let out = csl(&["verify", "--input", s(&tampered)]);
    assert_eq!(code(&out), 4);
    let v = stdout_json(&out);
    assert_eq!(v["status"], json!("failed"));
    assert_eq!(v["report"]["counterexample"], json!(4));
}

#[test]
fn semilinear_threshold_exit_code() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "sl.json",
        &json!({"ambient": {"free_rank": 1}, "colors": [{"kind": "semilinear", "pieces": [
            {"base": 0, "generators": [2]}, {"base": 1, "generators": [2]}
        ]}]}),
    );
    let out = csl(&["cover", "--input", s(&input), "--r", "2", "--h", "3"]);
    assert_eq!(code(&out), 5);
    assert!(String::from_utf8_lossy(&out.stderr).contains("need 4"));
    let out = csl(&[
        "cover",
        "--input",
        s(&input),
        "--r",
        "2",
        "--h",
        "6",
        "--verify",
        "--window",
        "0:80",
    ]);
    assert_eq!(code(&out), 0);
    let cert = stdout_json(&out);
    assert_eq!(cert["status"], json!("verified"));
    assert_eq!(cert["window"], json!([[0, 80]]));
}

#[test]
fn method_mismatch_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.json", &finite(&[&[0, 1]]));
    assert_eq!(
        code(&csl(&[
            "cover",
            "--input",
            s(&input),
            "--r",
            "2",
            "--h",
            "3",
            "--method",
            "submonoid"
        ])),
        2
    );
    assert_eq!(
        code(&csl(&[
            "cover",
            "--input",
            s(&input),
            "--r",
            "2",
            "--h",
            "3",
            "--method",
            "bogus"
        ])),
        2
    );
}

#[test]
fn mixed_kinds_are_unsupported() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "mixed.json",
        &json!({"ambient": {"free_rank": 1}, "colors": [
            {"kind": "finite", "elements": [0, 1]},
            {"kind": "translated_monoid", "base": 0, "monoid": [1]}
        ]}),
    );
    assert_eq!(
        code(&csl(&[
            "cover",
            "--input",
            s(&input),
            "--r",
            "2",
            "--h",
            "1,1"
        ])),
        3
    );
}

#[test]
fn submonoid_cover_in_a_window() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "m.json",
        &json!({"ambient": {"free_rank": 1}, "colors": [{"kind": "translated_monoid", "base": 5, "monoid": [1]}]}),
    );
    let out = csl(&[
        "cover",
        "--input",
        s(&input),
        "--r",
        "3",
        "--h",
        "2",
        "--verify",
        "--window",
        "0:60",
    ]);
    assert_eq!(code(&out), 0);
    let cert = stdout_json(&out);
    assert_eq!(cert["method"], json!("submonoid"));
    assert_eq!(cert["X"], json!([20]));
    // verifying a structured certificate without its window is unsupported
    let out = csl(&[
        "cover",
        "--input",
        s(&input),
        "--r",
        "3",
        "--h",
        "2",
        "--verify",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn approx_and_inhomogeneous_extras() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "a.json",
        &json!({"ambient": {"free_rank": 1}, "colors": [{"kind": "translated_monoid", "base": 0, "monoid": [1]}],
                "witnesses": [[0, 1]]}),
    );
    let out = csl(&[
        "cover",
        "--input",
        s(&input),
        "--r",
        "2",
        "--h",
        "2",
        "--method",
        "approx-submonoid",
        "--verify",
        "--window",
        "0:60",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["X"], json!([0, 1, 2]));

    let mut plain = finite(&[&[0, 1]]);
    plain["shift"] = json!([0, 4]);
    let input = write(&dir, "i.json", &plain);
    let out = csl(&[
        "cover",
        "--input",
        s(&input),
        "--r",
        "2",
        "--h",
        "3",
        "--method",
        "inhomogeneous",
        "--verify",
    ]);
    assert_eq!(code(&out), 0);
    let cert = stdout_json(&out);
    assert_eq!(cert["shift"], json!([0, 4]));
    assert_eq!(cert["bound"], json!(9));
    assert_eq!(cert["status"], json!("verified"));

    let input = write(&dir, "no-shift.json", &finite(&[&[0, 1]]));
    let out = csl(&[
        "cover",
        "--input",
        s(&input),
        "--r",
        "2",
        "--h",
        "3",
        "--method",
        "inhomogeneous",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn layers_command() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.json", &finite(&[&[0, 1, 2]]));
    let out = csl(&["layers", "--input", s(&input), "--h", "2", "--t", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["layer"], json!([2]));
    assert_eq!(
        v["profile"],
        json!([[0, 1], [1, 1], [2, 2], [3, 1], [4, 1]])
    );

    let out = csl(&["layers", "--input", s(&input), "--h", "3", "--structure"]);
    let v = stdout_json(&out);
    assert_eq!(v["layer"], json!([0, 1, 2, 3, 4, 5, 6]));
    assert_eq!(
        v["structure"],
        json!({"h": [3], "t": 1, "H": 6, "C": [], "c": 0, "d": 0, "D": [], "stabilized": true})
    );
}

#[test]
fn capacity_override_is_validated() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.json", &finite(&[&[0, 1]]));
    let out = Command::new(env!("CARGO_BIN_EXE_csl"))
        .args(["sumset", "--input", s(&input), "--h", "1"])
        .env("CSL_CAPACITY", "nonsense")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);

    let out = Command::new(env!("CARGO_BIN_EXE_csl"))
        .args(["layers", "--input", s(&input), "--h", "30"])
        .env("CSL_CAPACITY", "window_points=10")
        .output()
        .unwrap();
    assert_eq!(code(&out), 6);
}

fn rows(out: &Output) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    rdr.records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn cover_scan() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.json", &finite(&[&[0, 1]]));
    let out = csl(&[
        "scan",
        "--input",
        s(&input),
        "--r",
        "2",
        "--h-min",
        "1",
        "--h-max",
        "6",
    ]);
    assert_eq!(code(&out), 0);
    let header = String::from_utf8_lossy(&out.stdout)
        .lines()
        .next()
        .unwrap()
        .to_string();
    assert_eq!(header, "h1,method,size,bound,oracle_min,status");
    let rows = rows(&out);
    assert_eq!(rows.len(), 6);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0], (i + 1).to_string());
        assert_eq!(row[5], "verified");
        assert!(row[2].parse::<usize>().unwrap() <= 3);
        assert!(row[4].parse::<usize>().unwrap() <= row[2].parse().unwrap());
    }
}

#[test]
fn layer_scan_flags_first_stabilized_row() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.json", &finite(&[&[0, 1, 3], &[0, 2]]));
    let out = csl(&[
        "scan",
        "--input",
        s(&input),
        "--r",
        "2",
        "--t",
        "2",
        "--h-min",
        "1",
        "--h-max",
        "5",
    ]);
    assert_eq!(code(&out), 0);
    let header = String::from_utf8_lossy(&out.stdout)
        .lines()
        .next()
        .unwrap()
        .to_string();
    assert_eq!(
        header,
        "h1,h2,method,size,bound,oracle_min,status,stabilized"
    );
    let rows = rows(&out);
    assert_eq!(rows.len(), 25);
    assert_eq!(rows.iter().filter(|r| r[7] == "first").count(), 1);
    for row in &rows {
        assert!(
            ["verified", "not-ready", "threshold"].contains(&row[6].as_str()),
            "{row:?}"
        );
        if row[6] == "verified" {
            assert!(row[3].parse::<usize>().unwrap() <= 4);
        }
    }
}

#[test]
fn empty_scan_box() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.json", &finite(&[&[0, 1]]));
    let out = csl(&[
        "scan",
        "--input",
        s(&input),
        "--r",
        "2",
        "--h-min",
        "4",
        "--h-max",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "h1,method,size,bound,oracle_min,status\n"
    );
}
