use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dense-streams"));
    c.env_remove("DENSE_STREAMS_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dense-streams-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn gen_then_solve_from_file() {
    let path = scratch("er.txt");
    let o = run(&[
        "--seed",
        "4",
        "gen",
        "erdos-renyi",
        "--n",
        "10",
        "--p",
        "0.5",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = run(&[
        "maxcut",
        "--input",
        path.to_str().unwrap(),
        "--n",
        "10",
        "--oracle",
        "--trials",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    let summary: serde_json::Value = serde_json::from_str(lines[3]).unwrap();
    assert_eq!(summary["summary"]["trials"], 3);
    for line in &lines[..3] {
        let row: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(row["command"], "maxcut");
        assert!(row["exact"].as_f64().unwrap() <= row["optimum"].as_f64().unwrap());
    }
}

#[test]
fn rows_reproduce_from_their_seed() {
    let all = stdout(&run(&[
        "--seed",
        "10",
        "f0",
        "--gen",
        "distinct:300",
        "--trials",
        "3",
    ]));
    let third: serde_json::Value = serde_json::from_str(all.lines().nth(2).unwrap()).unwrap();
    let seed = third["seed"].as_u64().unwrap();
    let alone = stdout(&run(&[
        "--seed",
        &seed.to_string(),
        "f0",
        "--gen",
        "distinct:300",
    ]));
    let row: serde_json::Value = serde_json::from_str(alone.lines().next().unwrap()).unwrap();
    assert_eq!(row["estimate"], third["estimate"]);
}

#[test]
fn seed_from_environment() {
    let a = bin()
        .env("DENSE_STREAMS_SEED", "9")
        .args(["f0", "--gen", "distinct:500"])
        .output()
        .unwrap();
    let b = run(&["--seed", "9", "f0", "--gen", "distinct:500"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_reports_and_timing() {
    let o = run(&[
        "--format",
        "csv",
        "similarity",
        "--gen",
        "jaccard",
        "--n",
        "2000",
        "--union",
        "900",
        "--oracle",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("command,variant,seed,trial,params"));
    assert_eq!(text.lines().count(), 2);
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .starts_with("# summary"));

    let plain = stdout(&run(&[
        "rarity",
        "--gen",
        "multiplicity-profile",
        "--k",
        "2",
    ]));
    let timed = stdout(&run(&[
        "--timing",
        "rarity",
        "--gen",
        "multiplicity-profile",
        "--k",
        "2",
    ]));
    assert!(plain.contains("\"wall_ms\":null"));
    assert!(!timed.contains("\"wall_ms\":null"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(
        run(&["maxcut", "--gen", "bip", "--n", "8", "--alpha", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["maxcut", "--gen", "nonsense", "--n", "8"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["maxcut", "--gen", "bip", "--n", "40"]).status.code(),
        Some(4)
    );

    let bad = scratch("bad.txt");
    std::fs::write(&bad, "e 0 1\ne 1 two\n").unwrap();
    let o = run(&["maxcut", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 2"));

    std::fs::write(&bad, "e 0 1\ne 1 1\n").unwrap();
    assert_eq!(
        run(&["maxcut", "--input", bad.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
    std::fs::write(&bad, "r 5\nr 12\n").unwrap();
    assert_eq!(
        run(&["f0", "--input", bad.to_str().unwrap(), "--n", "10"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn sampler_and_hardlab_commands() {
    let o = run(&[
        "sample",
        "--gen",
        "distinct:200",
        "--n",
        "400",
        "--dup",
        "0",
        "--oracle",
        "--trials",
        "4",
    ]);
    assert!(o.status.success());
    let o = run(&[
        "--format",
        "csv",
        "hardlab",
        "gadget-det",
        "--n",
        "6",
        "--k",
        "3",
        "--trials",
        "3",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("experiment,instance,seed,trial,n,k,param,measured,reference,holds"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
    let o = run(&["hardlab", "copt", "--n", "8", "--k", "3", "--trials", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn csp_from_encoded_records() {
    let path = scratch("csp.txt");
    std::fs::write(&path, "c 6 0 1\nc 9 1 2\nc 0x5\n").unwrap();
    let o = run(&[
        "csp",
        "--input",
        path.to_str().unwrap(),
        "--n",
        "3",
        "--k",
        "2",
        "--oracle",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}
