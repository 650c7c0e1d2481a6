use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pascalchar"))
        .args(args)
        .output()
        .expect("run binary")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pascalchar-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn phi_examples() {
    let s = stdout(&["phi", "--p", "37", "--k", "10", "--n", "37"]);
    assert!(s.contains("phi(n) ~ 33.74726512434"), "{s}");
    assert!(s.contains("label: chi(2)=e^{20 pi i/36}"));
    let s = stdout(&["phi", "--p", "5", "--k", "0", "--n", "25"]);
    assert!(s.contains("phi(n) = 225\n"));
    let s = stdout(&["phi", "--p", "7", "--k", "3", "--n", "0"]);
    assert!(s.contains("phi(n) = 0\n"));
    let huge = "9".repeat(300);
    let s = stdout(&["phi", "--p", "5", "--k", "0", "--n", &huge]);
    assert!(s.contains("e"), "{s}");
}

#[test]
fn count_examples() {
    for method in ["formula", "brute"] {
        assert_eq!(
            stdout(&["count", "--p", "5", "--r", "1", "--n", "5", "--method", method]),
            "10\n"
        );
    }
    assert_eq!(
        stdout(&["count", "--p", "5", "--r", "1", "--n", "0"]),
        "0\n"
    );
    let out = run(&[
        "count", "--p", "5", "--r", "1", "--n", "20000", "--method", "brute",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["scan"]).status.code(), Some(2));
    assert_eq!(
        run(&["count", "--p", "6", "--r", "1", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["phi", "--p", "7", "--k", "6", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["count", "--p", "7", "--r", "7", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["model", "--p", "3", "--target", "Ycount:1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["witness", "--p", "37", "--k", "1", "--kmax", "3"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn scan_outputs_and_manifest() {
    let header = "p,k,paper_label,parity,re_phi,im_phi,abs_phi,max_T_b,max_T_abs,verdict\n";
    assert_eq!(stdout(&["scan", "--pmax", "2"]), header);

    let a = scratch("scan-a.csv");
    let table = stdout(&[
        "scan",
        "--pmax",
        "40",
        "--jobs",
        "3",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert!(table.contains("37  chi(2)=e^{20 pi i/36}"));
    let csv = fs::read_to_string(&a).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.ends_with(",36,37,row-dominant\n"));

    let manifest: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(format!("{}.manifest.json", a.display())).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["jobs"], 3);
    let digest = manifest["outputs"][0]["sha256"]
        .as_str()
        .unwrap()
        .to_string();

    let b = scratch("scan-b.csv");
    stdout(&[
        "scan",
        "--pmax",
        "40",
        "--jobs",
        "1",
        "--out",
        b.to_str().unwrap(),
    ]);
    let again: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(format!("{}.manifest.json", b.display())).unwrap(),
    )
    .unwrap();
    assert_eq!(again["outputs"][0]["sha256"].as_str().unwrap(), digest);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn table_commands() {
    let s = stdout(&["bounds", "--p", "37"]);
    assert!(s.starts_with("p,trivial,weil,weil_simple,max_abs_phi\n37,703,"));

    let s = stdout(&["ratio", "--p", "5", "--r", "2", "--kmax", "8"]);
    let last: f64 = s
        .lines()
        .last()
        .unwrap()
        .rsplit(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((last - 1.0).abs() < 0.05);

    let s = stdout(&["alpha", "--p", "3", "--k", "0", "--kmax", "6"]);
    assert!(s.starts_with("k,alpha_k,delta,bound_delta\n"));
    assert_eq!(s.lines().count(), 7);

    let s = stdout(&["psi", "--p", "5", "--k", "1", "--grid", "1..3"]);
    assert_eq!(s.lines().count(), 4);

    let s = stdout(&["means", "--pmax", "13"]);
    assert_eq!(s.lines().count(), 1 + 4);

    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["vartheta", "--p", "37", "--eps", "0.01"])).unwrap();
    assert!(v["vartheta"].as_f64().unwrap() >= 1.01);
}

#[test]
fn model_json_round_trips() {
    let text = stdout(&[
        "model",
        "--p",
        "53",
        "--samples",
        "2000",
        "--seed",
        "1",
        "--target",
        "Ycount:2",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in [
        "target", "p", "samples", "seed", "mc_mean", "mc_var", "cf_mean", "cf_var", "z_score",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v["z_score"].as_f64().unwrap() < 4.0);
    let reparsed: serde_json::Value =
        serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(reparsed, v);
    let again = stdout(&[
        "model",
        "--p",
        "53",
        "--samples",
        "2000",
        "--seed",
        "1",
        "--target",
        "Ycount:2",
        "--jobs",
        "1",
    ]);
    assert_eq!(again, text);
}

#[test]
fn scatter_counts() {
    let csv = stdout(&["scatter", "--pmax", "13"]);
    // Σ (p - 2) over 3, 5, 7, 11, 13.
    assert_eq!(csv.lines().count(), 1 + 1 + 3 + 5 + 9 + 11);
    assert!(csv.contains("\n3,1,odd,1.33333333333333,0\n"));
}
