use std::process::Command;

use serde_json::Value;
use subset_sums::cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("subsetsum").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn check_reports_verdict_and_witness() {
    let (code, out, _) = run(&["check", "--elements", "3,5,6,7"]);
    assert_eq!((code, out.trim()), (0, r#"{"is_distinct":true}"#));
    let v = json(&["check", "--elements", "1,2,3"]);
    assert_eq!(v["is_distinct"], false);
    let w = v["witness"].as_array().unwrap();
    let sum = |i: usize| {
        w[i].as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_u64().unwrap())
            .sum::<u64>()
    };
    assert_eq!(sum(0), sum(1));
}

#[test]
fn collision_prints_exact_numerator() {
    let (code, out, _) = run(&["collision", "--elements", "1,2,3"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"{"numerator":"10","value":0.15625}"#);
}

#[test]
fn exit_codes_distinguish_usage_from_domain_errors() {
    let (code, _, err) = run(&["check", "--elements", "2,1"]);
    assert_eq!(code, 1);
    let e: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(e["error"], "invalid_set");
    assert_eq!(run(&["check"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["spectrum", "--elements", "1", "--set", "x"]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("conway-guy"));
    let (code, _, err) = run(&["search", "-n", "30", "--max-a-n", "100"]);
    assert_eq!(code, 1);
    assert!(err.contains("\"capacity\""));
}

#[test]
fn conway_guy_round_trips_through_set_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cg12.txt");
    let p = path.to_str().unwrap();
    assert_eq!(
        run(&["conway-guy", "-n", "12", "--format", "csv", "--out", p]).0,
        0
    );
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 12);
    let inline = text.lines().collect::<Vec<_>>().join(",");
    for cmd in ["bounds", "collision", "gauss-dist", "diagnostics"] {
        let from_file = run(&[cmd, "--set", p]);
        let from_list = run(&[cmd, "--elements", &inline]);
        assert_eq!(from_file.0, 0, "{cmd}: {}", from_file.2);
        assert_eq!(from_file, from_list, "{cmd}");
    }
    let json_path = dir.path().join("cg12.json");
    let listed = json(&["conway-guy", "-n", "12"]);
    std::fs::write(&json_path, listed.to_string()).unwrap();
    assert_eq!(
        run(&["bounds", "--set", json_path.to_str().unwrap()]),
        run(&["bounds", "--set", p])
    );
}

#[test]
fn conway_guy_22_csv_ends_at_anchor() {
    let (_, out, _) = run(&["conway-guy", "-n", "22", "--format", "csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 22);
    assert_eq!(lines[21], "1051905");
}

#[test]
fn bounds_json_is_versioned_with_string_integers() {
    let v = json(&["bounds", "--elements", "1,2,4"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["sum"], "7");
    assert_eq!(v["sum_sq"], "21");
    assert_eq!(v["erdos_moser_sum_ok"], true);
    let (_, csv, _) = run(&["bounds", "--elements", "1,2,4", "--format", "csv"]);
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].split(',').count(), rows[1].split(',').count());
}

#[test]
fn spectrum_and_histogram_exports() {
    let (_, csv, _) = run(&["spectrum", "--elements", "1,2,3", "--format", "csv"]);
    assert_eq!(csv, "value,count\n-6,1\n-4,1\n-2,1\n0,2\n2,1\n4,1\n6,1\n");
    let v = json(&["spectrum", "--elements", "1,2"]);
    assert_eq!(
        v["entries"],
        serde_json::json!([[-3, 1], [-1, 1], [1, 1], [3, 1]])
    );
    let (_, csv, _) = run(&[
        "histogram",
        "--elements",
        "1",
        "--bins",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(csv, "bin_center,mass\n-0.5,0.5\n0.5,0.5\n");
}

#[test]
fn integral_regions() {
    let v = json(&["integral", "--elements", "1,2,4,8"]);
    assert_eq!(v["exact_full"], 1.0 / 32.0);
    assert_eq!(v["theorem1_floor"], 1.0 / 32.0);
    let near = json(&["integral", "--elements", "1,2,4,8", "--region", "near"]);
    let far = json(&["integral", "--elements", "1,2,4,8", "--region", "far"]);
    let sum = near["value"].as_f64().unwrap() + far["value"].as_f64().unwrap();
    assert!((sum - 1.0 / 32.0).abs() < 1e-15);
    let real = json(&[
        "integral",
        "--elements",
        "1,1.5",
        "--region",
        "full",
        "--tol",
        "1e-6",
    ]);
    assert!(real["error"].as_f64().unwrap() > 0.0);
    let sep = json(&["separation", "--elements", "1.5,2.5"]);
    assert_eq!(sep["separation"], 1.0);
}

#[test]
fn search_is_reproducible_and_logs_improvements() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("log.csv");
    let args = [
        "search",
        "-n",
        "8",
        "--max-a-n",
        "150",
        "--iterations",
        "2000",
        "--seed",
        "3",
        "--strategy",
        "greedy_local",
    ];
    let mut with_log: Vec<&str> = args.to_vec();
    with_log.extend(["--log", log.to_str().unwrap(), "--threads", "3"]);
    let a = run(&with_log);
    let b = run(&args);
    assert_eq!(a.0, 0, "{}", a.2);
    assert_eq!(a.1, b.1);
    let text = std::fs::read_to_string(&log).unwrap();
    assert!(text.starts_with("evaluation,distinct_count,distinct_fraction,total,elements\n"));
    let v: Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(
        text.lines().count() - 1,
        v["result"]["improvements"].as_array().unwrap().len()
    );
    assert_eq!(
        run(&[
            "search",
            "-n",
            "4",
            "--max-a-n",
            "20",
            "--strategy",
            "annealing"
        ])
        .0,
        1
    );
}

#[test]
fn binary_honours_thread_variable() {
    let bin = env!("CARGO_BIN_EXE_subsetsum");
    let output = |threads: &str| {
        Command::new(bin)
            .args([
                "search",
                "-n",
                "7",
                "--max-a-n",
                "80",
                "--iterations",
                "700",
                "--seed",
                "11",
            ])
            .env("SUBSETSUM_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = output("1");
    let auto = output("0");
    assert!(one.status.success());
    assert_eq!(one.stdout, auto.stdout);
    let bad = Command::new(bin)
        .args(["check", "--elements", "0,1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
