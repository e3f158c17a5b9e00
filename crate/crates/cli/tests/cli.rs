use std::path::PathBuf;
use std::process::{Command, Output};

fn data(file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(file)
        .display()
        .to_string()
}

fn antsys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antsys")).args(args).output().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn solve_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let att48 = data("att48.tsp");
    let out = antsys(&[
        "solve",
        "--instance",
        &att48,
        "--selection",
        "nn",
        "--nn",
        "30",
        "--iters",
        "100",
        "--seed",
        "42",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("best length"));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    let best = json["best_length"].as_u64().unwrap();
    assert!(best >= 10628);
    assert_eq!(json["per_iteration"].as_array().unwrap().len(), 100);
    assert_eq!(json["seed"].as_u64(), Some(42));
    assert_eq!(json["best_tour"].as_array().unwrap().len(), 49);
    let last = &json["per_iteration"][99];
    assert_eq!(last["best_so_far"].as_u64(), Some(best));
}

#[test]
fn solve_without_out_prints_json() {
    let out = antsys(&[
        "solve",
        "--instance",
        &data("berlin52.tsp"),
        "--iters",
        "2",
        "--workers",
        "2",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["n"].as_u64(), Some(52));
    assert!(stderr(&out).contains("best length"));
}

#[test]
fn missing_instance_is_a_usage_error() {
    let out = antsys(&["solve"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--instance"));
}

#[test]
fn invalid_rho_is_a_config_error() {
    let out = antsys(&["solve", "--instance", &data("att48.tsp"), "--rho", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("rho must be in (0,1]"));
    let out = antsys(&["solve", "--instance", &data("att48.tsp"), "--rho", "-0.5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn other_config_errors() {
    let att48 = data("att48.tsp");
    for args in [
        vec!["--workers", "0"],
        vec!["--theta", "0", "--deposit", "scatter-gather-tiled"],
        vec!["--iters", "0"],
        vec!["--ants", "0"],
        vec!["--selection", "nn", "--nn", "48"],
        vec!["--selection", "sideways"],
        vec!["--alpha", "nan"],
    ] {
        let mut full = vec!["solve", "--instance", att48.as_str()];
        full.extend(&args);
        let out = antsys(&full);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn unreadable_and_malformed_instances_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[u8]); 7] = [
        ("empty.tsp", b""),
        ("binary.tsp", &[0xff, 0xfe, 0x00, 0x9c, 0x10]),
        ("short.tsp", b"NAME: s\nTYPE: TSP\nDIMENSION: 5\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n3 2 2\n4 3 3\nEOF\n"),
        ("geo.tsp", b"NAME: g\nTYPE: TSP\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n1 0 0\n2 1 1\nEOF\n"),
        ("coord.tsp", b"NAME: c\nTYPE: TSP\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 zero\n2 1 1\nEOF\n"),
        ("huge.tsp", b"NAME: h\nTYPE: TSP\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1e300 1\nEOF\n"),
        ("same.tsp", b"NAME: z\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 4 4\n2 4 4\n3 4 4\nEOF\n"),
    ];
    for (name, bytes) in cases {
        let path = dir.path().join(name);
        std::fs::write(&path, bytes).unwrap();
        for command in ["solve", "verify"] {
            let out = antsys(&[command, "--instance", path.to_str().unwrap(), "--iters", "1"]);
            assert_eq!(out.status.code(), Some(2), "{command} {name}: {}", stderr(&out));
            assert!(!stderr(&out).contains("panicked"));
        }
    }
    let missing = dir.path().join("missing.tsp");
    let out = antsys(&["solve", "--instance", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_cleanly() {
    let out = antsys(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    for sub in ["solve", "bench", "verify"] {
        assert!(stdout(&out).contains(sub));
    }
}

fn bench_csv(dir: &std::path::Path, name: &str, extra: &[&str]) -> String {
    let path = dir.join(name);
    let instances = format!("{},{}", data("att48.tsp"), data("berlin52.tsp"));
    let mut args = vec![
        "bench",
        "--instance",
        &instances,
        "--selection",
        "roulette,data-parallel",
        "--iters",
        "3",
        "--reps",
        "2",
        "--seed",
        "9",
        "--out",
        path.to_str().unwrap(),
    ];
    args.extend(extra);
    let out = antsys(&args);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("update_ms"));
    std::fs::read_to_string(path).unwrap()
}

const HEADER: &str =
    "instance,n,selection,deposit,theta,rep,iter,construct_ms,update_ms,best_len,global_loads,atomic_ops,schema_version";

#[test]
fn bench_grid_shape() {
    let dir = tempfile::tempdir().unwrap();
    let csv = bench_csv(dir.path(), "a.csv", &[]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len() - 1, 2 * 2 * 2 * 3);
    assert!(!csv.contains('\r'));
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 13);
        assert_eq!(fields[12], "1");
        // Accumulate records 2mn loads and atomics.
        let n: u64 = fields[1].parse().unwrap();
        assert_eq!(fields[10].parse::<u64>().unwrap(), 2 * n * n);
        assert_eq!(fields[11].parse::<u64>().unwrap(), 2 * n * n);
    }
}

#[test]
fn bench_scatter_gather_loads() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sg.csv");
    let out = antsys(&[
        "bench",
        "--instance",
        &data("att48.tsp"),
        "--deposit",
        "scatter-gather,symmetric-reduction",
        "--iters",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(path).unwrap();
    let rows: Vec<Vec<String>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    for row in &rows[..2] {
        assert_eq!(row[3], "scatter-gather");
        assert_eq!(row[4], "");
        assert_eq!(row[10], "10616832");
    }
    for row in &rows[2..] {
        assert_eq!(row[3], "symmetric-reduction");
        assert_eq!(row[4], "64");
        assert_eq!(row[10], "82944");
    }
}

fn strip_timings(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f[7] = "";
            f[8] = "";
            f.join(",")
        })
        .collect()
}

#[test]
fn bench_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = bench_csv(dir.path(), "a.csv", &["--workers", "1"]);
    let b = bench_csv(dir.path(), "b.csv", &["--workers", "3"]);
    assert_eq!(strip_timings(&a), strip_timings(&b));
}

#[test]
fn bench_fails_fast() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("x.csv");
    let instances = format!("{},{}", data("att48.tsp"), dir.path().join("absent.tsp").display());
    let out = antsys(&[
        "bench",
        "--instance",
        &instances,
        "--iters",
        "1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let small = dir.path().join("small.tsp");
    std::fs::write(
        &small,
        "NAME: small\nTYPE: TSP\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 0 5\n3 5 5\n4 5 0\nEOF\n",
    )
    .unwrap();
    let instances = format!("{},{}", data("att48.tsp"), small.display());
    let out = antsys(&[
        "bench",
        "--instance",
        &instances,
        "--selection",
        "nn",
        "--nn",
        "10",
        "--iters",
        "1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    assert!(stderr(&out).contains("nn must satisfy"));
    let out = antsys(&["bench", "--instance", &data("att48.tsp"), "--reps", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_att48_passes() {
    for theta in ["64", "5", "7"] {
        let out = antsys(&[
            "verify",
            "--instance",
            &data("att48.tsp"),
            "--seed",
            "7",
            "--theta",
            theta,
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        let text = stdout(&out);
        let pairs = text
            .lines()
            .filter(|l| l.starts_with("PASS") && l.contains(" vs "))
            .count();
        assert_eq!(pairs, 6, "{text}");
        assert!(!text.contains("FAIL"));
    }
}

#[test]
fn verify_rejects_bad_tolerance() {
    let out = antsys(&["verify", "--instance", &data("att48.tsp"), "--tolerance", "-1"]);
    assert_eq!(out.status.code(), Some(1));
}
