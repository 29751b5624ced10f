use std::process::{Command, Output};

fn dpchroma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpchroma")).args(args).env_remove("DPCHROMA_WORKERS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dp_exact_prints_value_and_witness() {
    let o = dpchroma(&["dp-exact", "theta:2,2,2", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("18"));
    let witness: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(witness["fold"], 3);
    assert_eq!(witness["twists"].as_array().unwrap().len(), 2);

    let o = dpchroma(&["dp-exact", "theta:2,2,2", "--m", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["minimum"], "18");
}

#[test]
fn compare_table() {
    let o = dpchroma(&["compare", "theta:2,2,3", "--m", "2..5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!((rows[0][1], rows[0][2]), ("0", "0"));
    for r in &rows[1..] {
        assert_eq!(r[3], "less", "{r:?}");
        assert!(r[2].parse::<u64>().unwrap() < r[1].parse::<u64>().unwrap());
    }
}

#[test]
fn threshold_values() {
    let o = dpchroma(&["threshold", "--edges", "1"]);
    assert!(stdout(&o).contains("least integer 1"));
    let o = dpchroma(&["threshold", "--edges", "8", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["least_integer"], 8);
}

#[test]
fn formula_dispatch() {
    let o = dpchroma(&["dp-formula", "theta:3,2,2", "--m", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["method"].as_str(), v["case"].as_str(), v["value"].as_str()), (Some("theta-closed-form"), Some("ii"), Some("39")));

    let dir = std::env::temp_dir().join(format!("dpchroma-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("triangle.txt");
    std::fs::write(&path, "n 3\ne a b\ne b c\ne a c\n").unwrap();
    let o = dpchroma(&["dp-formula", path.to_str().unwrap(), "--m", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["method"].as_str(), v["value"].as_str()), (Some("feedback-vertex"), Some("24")));
    assert!(v["witness"]["fold"] == 4);
}

#[test]
fn scan_reports_empirical_n() {
    let o = dpchroma(&["scan", "theta:2,2,3"]);
    assert!(stdout(&o).starts_with("eventually-less witness=2 N=3"));
    let o = dpchroma(&["scan", "theta:2,3,3"]);
    assert_eq!(stdout(&o).trim(), "eventually-equal");
    let o = dpchroma(&["scan", "theta:3,2,4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_all_passes() {
    let o = dpchroma(&["verify", "--suite", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with(" 0 failed\n"));
}

#[test]
fn output_does_not_depend_on_workers() {
    let run = |w: &str| {
        Command::new(env!("CARGO_BIN_EXE_dpchroma"))
            .args(["verify", "--suite", "lemmas", "--format", "json"])
            .env("DPCHROMA_WORKERS", w)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert_eq!(one, run("3"));
    let by_flag = dpchroma(&["verify", "--suite", "lemmas", "--format", "json", "--workers", "2"]).stdout;
    assert_eq!(one, by_flag);
}

#[test]
fn errors_exit_with_two() {
    for args in [
        &["frobnicate"][..],
        &["chrom", "/definitely/not/here.txt"],
        &["theta-chrom", "theta:1,1"],
        &["dp-exact", "theta:2,2,2", "--m", "9"],
        &["compare", "theta:2,2,2", "--m", "5..2"],
        &["verify", "--suite", "nope"],
    ] {
        let o = dpchroma(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let dir = std::env::temp_dir().join(format!("dpchroma-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.txt");
    std::fs::write(&path, "n 2\nedge a b\n").unwrap();
    let o = dpchroma(&["chrom", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed graph file"));
    let o = dpchroma(&["dp-exact", "theta:2,2,2", "--m", "9"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds the budget"));
}
