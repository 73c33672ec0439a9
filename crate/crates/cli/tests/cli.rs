use std::path::Path;
use std::process::{Command, Output};

fn divdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divdiv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn check_cube_k1_reports_exactness_pass() {
    let o = divdiv(&["check", "--element", "cube", "--degree", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["cells"][0]["exactness"]["pass"], true);
}

#[test]
fn check_cube_k0_flags_expected_defect() {
    let o = divdiv(&["check", "--element", "cube", "--degree", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("expected (k=0)"));
}

#[test]
fn json_is_byte_identical_across_runs() {
    let args = ["--seed", "7", "check", "--element", "hex", "--degree", "1", "--json"];
    let a = divdiv(&args);
    let b = divdiv(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(divdiv(&["check", "--degree", "x"]).status.code(), Some(2));
    assert_eq!(divdiv(&["check", "--element", "sphere"]).status.code(), Some(2));
    assert_eq!(divdiv(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(divdiv(&["convergence", "--degrees", "2..1"]).status.code(), Some(2));
}

#[test]
fn file_element_needs_a_mesh() {
    let o = divdiv(&["check", "--element", "file"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--mesh"));
}

#[test]
fn generated_mesh_round_trips_through_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cube2.json");
    let p = path.to_str().unwrap();
    let o = divdiv(&["gen-mesh", "--cube", "2", "--out", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = divdiv(&["check", "--element", "file", "--mesh", p, "--degree", "0", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), 8);
}

fn lines(p: &Path) -> Vec<String> {
    std::fs::read_to_string(p).unwrap().lines().map(String::from).collect()
}

#[test]
fn convergence_writes_combined_and_per_degree_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("conv.csv");
    let o = divdiv(&[
        "convergence",
        "--family",
        "cube",
        "--degrees",
        "0..1",
        "--sizes",
        "1,2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let all = lines(&out);
    assert_eq!(all[0], "h,ndof,err_sigma,err_u,err_total");
    assert_eq!(all.len(), 5);
    for k in 0..2 {
        let rk = lines(&dir.path().join(format!("conv_k{k}.csv")));
        assert_eq!(rk.len(), 3);
        assert_eq!(rk[1..], all[1 + 2 * k..3 + 2 * k]);
    }
    let err = stderr(&o);
    assert!(err.contains("k,slope\n0,"));
}

#[test]
fn single_size_leaves_slope_empty_and_matches_solve() {
    let conv = divdiv(&["convergence", "--degrees", "0", "--sizes", "1"]);
    assert_eq!(conv.status.code(), Some(0), "{}", stderr(&conv));
    assert!(stderr(&conv).ends_with("k,slope\n0,\n"));
    let solve = divdiv(&["solve", "--cube", "1", "--degree", "0"]);
    assert_eq!(solve.status.code(), Some(0));
    assert_eq!(conv.stdout, solve.stdout);
}

#[test]
fn solve_from_mesh_file_matches_cube_flag() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("m.json");
    let out = dir.path().join("s.csv");
    divdiv(&["gen-mesh", "--cube", "1", "--out", mesh.to_str().unwrap()]);
    let o = divdiv(&["solve", "--mesh", mesh.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let direct = divdiv(&["solve", "--cube", "1"]);
    assert_eq!(std::fs::read(&out).unwrap(), direct.stdout);
}

#[test]
fn unknown_case_fails() {
    let o = divdiv(&["solve", "--cube", "1", "--case", "nope"]);
    assert_eq!(o.status.code(), Some(1));
}
