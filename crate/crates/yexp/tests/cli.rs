use std::path::PathBuf;
use std::process::{Command, Output};

fn yexp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_yexp")).args(args).env_remove("YEXP_TOL_SCALE").output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("yexp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exponents_row() {
    let o = yexp(&["exponents", "--family", "D", "--rank", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "D,4,8,2,4,4,6");
    let o = yexp(&["exponents", "--family", "B", "--rank", "2"]);
    assert_eq!(stdout(&o).trim(), "B,2,10,2,4,5,6,8");
}

#[test]
fn exponents_csv_file() {
    let p = tmp("c3.csv");
    let o = yexp(&["exponents", "--family", "C", "--rank", "3", "--csv", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&p).unwrap().trim(), "C,3,12,2,4,5,6,6,7,8,10");
}

#[test]
fn verify_b6_json() {
    let p = tmp("b6.json");
    let o = yexp(&["verify", "--family", "B", "--rank", "6", "--json", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["type"], "B");
    assert_eq!(v["rank"], 6);
    assert_eq!(v["period"], 26);
    assert_eq!(v["n_vertices"], 13);
    assert_eq!(v["checks"]["conjecture_38"]["pass"], true);
    for key in ["fixed_point", "periodicity", "jacobian_fd", "lemma_vectors"] {
        assert_eq!(v["checks"][key]["pass"], true, "{key}");
    }
    assert_eq!(v["exponents"].as_array().unwrap().len(), 13);
    assert_eq!(v["charpoly"].as_array().unwrap().len(), 14);
}

#[test]
fn conjecture_c_forms() {
    let o = yexp(&["conjecture-c", "--rank", "5", "--samples", "32", "--csol-form", "corrected"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = yexp(&["conjecture-c", "--rank", "5", "--samples", "32"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("form=printed"));
}

#[test]
fn conjecture_c_json_range() {
    let p = tmp("csol.json");
    let o = yexp(&["conjecture-c", "--rank", "3", "--rank-max", "5", "--csol-form", "corrected", "--json", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 3);
    assert!(arr[2]["csol"]["residual"].as_f64().unwrap() <= 1e-7);
}

#[test]
fn usage_errors() {
    assert_eq!(yexp(&["verify", "--family", "E", "--rank", "3"]).status.code(), Some(2));
    assert_eq!(yexp(&["verify", "--family", "D", "--rank", "3"]).status.code(), Some(2));
    assert_eq!(yexp(&["verify", "--family", "A", "--rank", "13"]).status.code(), Some(2));
    assert_eq!(yexp(&["verify", "--family", "A", "--rank", "2", "--tol-charpoly", "0"]).status.code(), Some(2));
    assert_eq!(yexp(&["frobnicate"]).status.code(), Some(2));
    let o = yexp(&["verify", "--family", "A", "--rank", "2", "--json", "/nonexistent/dir/out.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(yexp(&["--help"]).status.code(), Some(0));
}

#[test]
fn tolerance_scale_env() {
    let run = |scale: &str| {
        Command::new(env!("CARGO_BIN_EXE_yexp"))
            .args(["periodicity", "--family", "A", "--rank", "3"])
            .env("YEXP_TOL_SCALE", scale)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("1"), Some(0));
    assert_eq!(run("1e-300"), Some(1));
    assert_eq!(run("abc"), Some(2));
    assert_eq!(run("-1"), Some(2));
}

#[test]
fn deterministic_for_fixed_seed() {
    let a = yexp(&["periodicity", "--family", "B", "--rank", "3", "--seed", "9"]);
    let b = yexp(&["periodicity", "--family", "B", "--rank", "3", "--seed", "9"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("seed=9"));
}

#[test]
fn quiver_and_tables() {
    let o = yexp(&["quiver", "--family", "A", "--rank", "2"]);
    let s = stdout(&o);
    assert!(s.starts_with("# Q(A2,2) vertices=2"));
    assert!(s.contains("nu "));
    let o = yexp(&["qtable", "--family", "B", "--rank", "3"]);
    let s = stdout(&o);
    assert!(s.starts_with("i,m,Q"));
    let o = yexp(&["ytable", "--family", "D", "--rank", "4"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines[0], "i,m,Y");
    assert!(lines[1].starts_with("1,1,3.0000000000000"));
    let o = yexp(&["eta", "--family", "C", "--rank", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("vertex,color,sign,node,m,eta"));
}

#[test]
fn sweep_sorted_and_complete() {
    let p = tmp("sweep.json");
    let c = tmp("sweep.csv");
    let o = yexp(&[
        "sweep",
        "--family",
        "D",
        "--rank-max",
        "6",
        "--json",
        p.to_str().unwrap(),
        "--csv",
        c.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    let ranks: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, [4, 5, 6]);
    let csv = std::fs::read_to_string(&c).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "D,4,8,2,4,4,6");
}
