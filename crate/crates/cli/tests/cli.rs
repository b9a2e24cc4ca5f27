use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dsd_cli::CSV_HEADER;

fn dsd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsd")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const K4: &str = "1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";

fn column(csv: &str, row: usize, name: &str) -> String {
    let idx = CSV_HEADER.split(',').position(|c| c == name).unwrap();
    csv.lines().nth(row).unwrap().split(',').nth(idx).unwrap().to_string()
}

#[test]
fn greedy_on_k4() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write(dir.path(), "k4.txt", K4);
    let o = dsd(&["uds", "--algo", "greedy", "--input", &k4]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    assert_eq!(column(&text, 1, "dataset"), "k4");
    assert_eq!(column(&text, 1, "density"), "1.5");
    assert_eq!(column(&text, 1, "s_size"), "4");
}

#[test]
fn oracle_row() {
    let dir = tempfile::tempdir().unwrap();
    let tp = write(dir.path(), "tp.txt", "0 1\n1 2\n0 2\n2 3\n");
    let text = stdout(&dsd(&["oracle", "--input", &tp]));
    assert_eq!(column(&text, 1, "algo"), "brute_force");
    assert_eq!(column(&text, 1, "density"), "1.0");
    assert_eq!(column(&text, 1, "verified"), "true");
    let text = stdout(&dsd(&["oracle", "--directed", "--input", &tp]));
    assert_eq!(column(&text, 1, "t_size"), "2");
}

#[test]
fn directed_run_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let star = write(dir.path(), "star.txt", "0 1\n0 2\n0 3\n0 4\n");
    let o = dsd(&["dds", "--algo", "dc_exact", "--input", &star, "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["density"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert_eq!(v["s"], serde_json::json!([0]));
    assert_eq!(v["t"], serde_json::json!([1, 2, 3, 4]));
    assert_eq!(v["gamma"], serde_json::json!(0.0));
    let text = stdout(&dsd(&[
        "dds",
        "--algo",
        "dfw_exact",
        "--adjust-intervals",
        "false",
        "--input",
        &star,
    ]));
    assert_eq!(column(&text, 1, "density"), "2.0");
}

#[test]
fn generator_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let o = dsd(&[
            "gen",
            "two-clique",
            "--k",
            "20",
            "--remove",
            "0.01",
            "--seed",
            "7",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 190 + 189 + 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write(dir.path(), "k4.txt", K4);
    assert_eq!(dsd(&["uds", "--algo", "nope", "--input", &k4]).status.code(), Some(2));
    assert_eq!(dsd(&["uds", "--input", &k4]).status.code(), Some(2));
    assert_eq!(
        dsd(&["uds", "--algo", "fw_exact", "--eps", "0.1", "--input", &k4])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        dsd(&["uds", "--algo", "greedy", "--reduction", "twice", "--input", &k4])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(dsd(&["gen", "two-clique", "--k", "2"]).status.code(), Some(2));
    let missing = dir.path().join("missing.txt");
    assert_eq!(
        dsd(&["uds", "--algo", "greedy", "--input", missing.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    let bad = write(dir.path(), "bad.txt", "1 x\n");
    assert_eq!(
        dsd(&["uds", "--algo", "greedy", "--input", &bad]).status.code(),
        Some(1)
    );
    assert_eq!(dsd(&["--help"]).status.code(), Some(0));
}

#[test]
fn iter_cap_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    dsd(&[
        "gen",
        "gnp",
        "--n",
        "60",
        "--p",
        "0.2",
        "--seed",
        "3",
        "--out",
        g.to_str().unwrap(),
    ]);
    let run = |cap: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_dsd"))
            .args([
                "uds",
                "--algo",
                "fw_exact",
                "--reduction",
                "none",
                "--input",
                g.to_str().unwrap(),
            ])
            .env("DSD_ITER_CAP", cap)
            .output()
            .unwrap();
        (o.status.code(), stdout(&o))
    };
    let (code, text) = run("3");
    assert_eq!(code, Some(0));
    assert_eq!(column(&text, 1, "iterations"), "3");
    assert_eq!(run("three").0, Some(2));
}

#[test]
fn bench_appends_under_one_header() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write(dir.path(), "k4.txt", K4);
    let out = dir.path().join("bench.csv");
    for _ in 0..2 {
        let o = dsd(&[
            "bench",
            "--input",
            &k4,
            "--algo",
            "greedy,fw_app",
            "--eps",
            "1,0.1",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let text = fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().filter(|l| *l == CSV_HEADER).count(), 1);
    assert_eq!(text.lines().count(), 1 + 2 * 3);
    assert_eq!(column(&text, 2, "algo"), "fw_app");
    assert_eq!(column(&text, 3, "eps"), "0.1");
}

#[test]
fn no_timing_blanks_elapsed() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write(dir.path(), "k4.txt", K4);
    let text = stdout(&dsd(&["uds", "--algo", "flow_exact", "--input", &k4, "--no-timing"]));
    assert_eq!(column(&text, 1, "elapsed_ms"), "");
    let text = stdout(&dsd(&["uds", "--algo", "flow_exact", "--input", &k4]));
    assert!(column(&text, 1, "elapsed_ms").parse::<f64>().is_ok());
}
