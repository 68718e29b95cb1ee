use std::fs;
use std::process::Command;

use pdgraph::cli::{main_with_args, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pdgraph"));
    cmd.env("RUST_LOG", "warn");
    cmd
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn expect_cliques_csv() {
    let (code, out) = run(&[
        "expect",
        "cliques",
        "--seed-graph",
        "k3",
        "--p",
        "0.5",
        "--k",
        "2",
        "--n",
        "5",
    ]);
    assert_eq!(code, EXIT_OK);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let header = rdr.headers().unwrap().clone();
    let col = header.iter().position(|h| h == "value").unwrap();
    let row = rdr.records().next().unwrap().unwrap();
    assert_eq!(row[col].parse::<f64>().unwrap(), 5.0);
}

#[test]
fn critical_json() {
    let (code, out) = run(&["critical", "--k-max", "3", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let text = v.to_string();
    assert!(text.contains("0.567143"), "{text}");
}

#[test]
fn simulate_writes_file_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sim.csv");
    let code = main_with_args([
        "pdgraph",
        "simulate",
        "--seed-graph",
        "k3",
        "--p",
        "0.5",
        "--n",
        "40",
        "--replicates",
        "2000",
        "--track",
        "c2,c3,s2,f0",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("observable,k,n,count,mean,se,oracle,z,pass"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")), "{text}");
}

#[test]
fn simulate_flags_wrong_oracle_free_setting() {
    // a z-threshold of zero cannot be met by a noisy estimate
    let code = main_with_args([
        "pdgraph",
        "simulate",
        "--seed-graph",
        "k3",
        "--p",
        "0.5",
        "--n",
        "30",
        "--replicates",
        "500",
        "--track",
        "c3",
        "--z-threshold",
        "0",
        "--output",
        "/dev/null",
    ]);
    assert_eq!(code, EXIT_CHECK_FAILED);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "seed-graph = \"k3\"\np = 1.0\nk = 2\nn = [4]\n").unwrap();
    let (code, out) = run(&["expect", "stars", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("1.6000000000000000e1"), "{out}");
    let (code, out) = run(&[
        "expect",
        "stars",
        "--config",
        cfg.to_str().unwrap(),
        "--p",
        "0",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("6.0000000000000000e0"), "{out}");
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["simulate", "--p", "0.5"]).0, EXIT_USAGE);
    assert_eq!(
        run(&[
            "expect",
            "cliques",
            "--seed-graph",
            "/no/such/file",
            "--p",
            "0.5",
            "--n",
            "5"
        ])
        .0,
        EXIT_USAGE
    );
    assert_eq!(
        run(&[
            "expect",
            "cliques",
            "--seed-graph",
            "k3",
            "--p",
            "1.5",
            "--n",
            "5"
        ])
        .0,
        EXIT_USAGE
    );
    assert_eq!(run(&["no-such-command"]).0, EXIT_USAGE);
}

#[test]
fn edge_list_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seed.txt");
    fs::write(&path, "# square\nn 4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
    let (code, out) = run(&[
        "expect",
        "cliques",
        "--seed-graph",
        path.to_str().unwrap(),
        "--p",
        "1",
        "--k",
        "2",
        "--n",
        "4,5",
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn pdmp_dump() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("x.csv");
    let (code, _) = run(&[
        "pdmp",
        "--p",
        "0.8",
        "--t",
        "5",
        "--replicates",
        "50",
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let text = fs::read_to_string(&dump).unwrap();
    assert_eq!(text.lines().count(), 51);
}

#[test]
fn degree_law_sums_to_one() {
    let (code, out) = run(&[
        "degree-law",
        "--n0",
        "4",
        "--a",
        "2",
        "--p",
        "0.7",
        "--n",
        "20",
    ]);
    assert_eq!(code, EXIT_OK);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let col = rdr
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == "pmf")
        .unwrap();
    let total: f64 = rdr
        .records()
        .map(|r| r.unwrap()[col].parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}
