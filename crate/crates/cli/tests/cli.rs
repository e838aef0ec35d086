use std::path::Path;
use std::process::{Command, Output};

fn hpws(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpws"))
        .args(args)
        .env_remove("HPWS_THREADS")
        .output()
        .expect("spawn hpws")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn build_lowerbound(dir: &Path) {
    let o = hpws(&["build", "--lowerbound", "--s", "3", "--out", dir.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("n=8 pairs=13 edges=13"), "{}", stdout(&o));
}

#[test]
fn two_points_make_one_edge() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pts.csv");
    std::fs::write(&input, "0.1,0.2\n0.7,0.9\n").unwrap();
    let out = dir.path().join("out");
    let o = hpws(&[
        "build",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("n=2 pairs=1 edges=1 max_degree=1"));
    for f in ["spanner.json", "tables.csv", "spanner.dot", "labels.csv", "wspd.csv"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
}

#[test]
fn lower_bound_route_trace() {
    let dir = tempfile::tempdir().unwrap();
    build_lowerbound(dir.path());
    let spanner = dir.path().join("spanner.json");
    let o = hpws(&["route", "--spanner", spanner.to_str().unwrap(), "p4", "p5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("path p4,p3,p1,p8,p5"), "{text}");
    assert!(text.contains("hops 4"));
    assert!(text.contains("ratio 2.33333333333"));
    assert_eq!(text.matches(" ascend ").count(), 2);
    assert_eq!(text.matches(" descend ").count(), 2);

    let tables = dir.path().join("tables.csv");
    let o = hpws(&[
        "route",
        "--spanner",
        spanner.to_str().unwrap(),
        "--tables",
        tables.to_str().unwrap(),
        "1",
        "1",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("hops 0 length 0"));
}

#[test]
fn unknown_label_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    build_lowerbound(dir.path());
    let spanner = dir.path().join("spanner.json");
    let o = hpws(&["route", "--spanner", spanner.to_str().unwrap(), "1", "9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_file_exits_two() {
    let o = hpws(&["route", "--spanner", "/definitely/not/here.json", "1", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hpws(&["build", "--input", "/definitely/not/here.csv"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hpws(&["verify", "--s", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn same_seed_same_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = hpws(&[
            "build",
            "--n",
            "300",
            "--seed",
            "9",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    for f in ["spanner.json", "tables.csv", "spanner.dot", "labels.csv", "wspd.csv"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert!(x == y, "{f} differs");
    }
}

#[test]
fn verify_lower_bound_reports_seven_thirds() {
    let o = hpws(&["verify", "--lowerbound", "--s", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let r = v["observed"]["max_routing"].as_f64().unwrap();
    assert!((r - 7.0 / 3.0).abs() < 1e-11, "{r}");
}

#[test]
fn verify_with_no_arguments_passes() {
    let o = hpws(&["verify"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn corrupted_table_is_named() {
    let dir = tempfile::tempdir().unwrap();
    build_lowerbound(dir.path());
    let tables = dir.path().join("tables.csv");
    let text = std::fs::read_to_string(&tables).unwrap();
    // Widen one descending interval so it overlaps a sibling's.
    let bad = text.replace("\n1,3,3,4\n", "\n1,3,8,8\n");
    assert_ne!(bad, text);
    let bad_path = dir.path().join("bad.csv");
    std::fs::write(&bad_path, bad).unwrap();
    let spanner = dir.path().join("spanner.json");
    let o = hpws(&[
        "verify",
        "--spanner",
        spanner.to_str().unwrap(),
        "--tables",
        bad_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("descending uniqueness"));

    let o = hpws(&[
        "verify",
        "--spanner",
        spanner.to_str().unwrap(),
        "--tables",
        tables.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn bench_rows_respect_bounds() {
    let o = hpws(&["bench", "--sweep", "s", "--n", "120", "--no-timing"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("n,d_or_tau,s,pairs"));
    let mut rows = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let s: f64 = f[2].parse().unwrap();
        let routing: f64 = f[6].parse().unwrap();
        assert!(routing <= 1.0 + 4.0 / s + 1.0 / (s - 1.0) + 1e-9, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 6);

    let o = hpws(&["bench", "--sweep", "n", "--values", "64,256", "--no-timing"]);
    for line in stdout(&o).lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let n: u32 = f[0].parse().unwrap();
        let hops: u32 = f[7].parse().unwrap();
        assert!(hops <= 2 * n.ilog2() + 1, "{line}");
    }
    let again = hpws(&["bench", "--sweep", "n", "--values", "64,256", "--no-timing"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn doubling_from_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    let n = 12;
    let mut text = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| (i as i64 - j as i64).abs().to_string()).collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    std::fs::write(&m, text).unwrap();
    let metric = format!("matrix:{}", m.display());
    let o = hpws(&["verify", "--metric", &metric, "--tau", "11"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tau"], 11.0);
}
