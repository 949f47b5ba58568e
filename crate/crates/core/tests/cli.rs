use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_pipfract"));
    c.env_remove("PIPFRACT_CACHE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn csv_values(text: &str) -> Vec<(u64, i64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i,value"));
    lines
        .map(|l| {
            let (i, v) = l.split_once(',').unwrap();
            (i.parse().unwrap(), v.parse().unwrap())
        })
        .collect()
}

fn values(text: &str) -> Vec<i64> {
    csv_values(text).into_iter().map(|(_, v)| v).collect()
}

#[test]
fn pip_columns() {
    assert_eq!(values(&stdout(&["pip", "-k", "2", "-s", "1", "-i", "1:5"])), [7, 13, 19, 37, 43]);
    assert_eq!(values(&stdout(&["pip", "-k", "0", "-s", "0", "-i", "1:3"])), [1, 2, 3]);
    let table1: Vec<i64> = include_str!("data/table1_pip.csv")
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values(&stdout(&["pip", "-k", "2", "-s", "0", "-i", "1:20"])), table1);
    let rows = csv_values(&stdout(&["pip", "-k", "1", "-i", "7:9"]));
    assert_eq!(rows, [(7, 17), (8, 19), (9, 23)]);
}

#[test]
fn pip_json() {
    let v = json(&["pip", "-k", "1", "-i", "1:3", "--format", "json"]);
    assert_eq!(v[2]["i"], 3);
    assert_eq!(v[2]["value"], 5);
}

#[test]
fn daleth_filters() {
    let base = ["daleth", "-h", "1", "-n", "2", "-s", "0", "-k", "1", "-i", "1:3"];
    assert_eq!(values(&stdout(&base)), [1, 0, 2]);
    let mut signed = base.to_vec();
    signed.extend(["--filter", "sign"]);
    assert_eq!(values(&stdout(&signed)), [1, 0, 1]);
    let mut quant = base.to_vec();
    quant.extend(["--filter", "quant256"]);
    assert_eq!(values(&stdout(&quant)), [128, 0, 255]);
    assert_eq!(values(&stdout(&["daleth", "-n", "0", "-k", "1", "-i", "1:4"])), [2, 3, 5, 7]);
}

#[test]
fn cache_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.bin");
    let v = json(&["cache", "--limit", "1000000", "--path", path.to_str().unwrap()]);
    assert_eq!(v["count"], 78498);
    assert_eq!(v["max"], 999983);
    assert!(path.exists());
    let small = dir.path().join("two.bin");
    let v = json(&["cache", "--limit", "2", "--path", small.to_str().unwrap()]);
    assert_eq!((v["count"].as_u64(), v["max"].as_u64()), (Some(1), Some(2)));
}

#[test]
fn cache_failure_is_reported() {
    let out = run(&["cache", "--limit", "100", "--path", "/nonexistent/dir/c.bin"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("/nonexistent/dir/c.bin"), "{err}");
}

#[test]
fn cache_speeds_lookups_without_changing_them() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.bin");
    let p = path.to_str().unwrap();
    stdout(&["--checkpoint-stride", "1000", "cache", "--limit", "200000", "--path", p]);
    let plain = stdout(&["pip", "-k", "2", "-i", "100:140"]);
    let cached = stdout(&["--cache", p, "pip", "-k", "2", "-i", "100:140"]);
    let via_env = bin()
        .env("PIPFRACT_CACHE", p)
        .args(["pip", "-k", "2", "-i", "100:140"])
        .output()
        .unwrap();
    assert_eq!(plain, cached);
    assert_eq!(plain.as_bytes(), via_env.stdout.as_slice());
}

#[test]
fn config_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "universe_bound = 100\nthreads = 1\n").unwrap();
    let c = cfg.to_str().unwrap();
    // config bound too small for p_30 = 113
    let out = run(&["--config", c, "pip", "-k", "1", "-i", "30:30"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("universe bound 100"));
    // flag overrides the file
    assert_eq!(
        values(&stdout(&["--config", c, "--universe-bound", "1000", "pip", "-k", "1", "-i", "30:30"])),
        [113]
    );
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert!(!run(&["--config", c, "pip", "-k", "1", "-i", "1:1"]).status.success());
}

#[test]
fn out_of_universe_exits_nonzero() {
    let out = run(&["--universe-bound", "1000", "pip", "-k", "3", "-i", "1:40"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("beyond the universe bound"), "{err}");
}

#[test]
fn threads_do_not_change_output() {
    let args = ["daleth", "-k", "3", "-i", "1:400"];
    let one = stdout(&[&["--threads", "1", "--segment-span", "65536"][..], &args].concat());
    let four = stdout(&[&["--threads", "4", "--segment-span", "129"][..], &args].concat());
    assert_eq!(one, four);
    assert_eq!(one, stdout(&args));
}

#[test]
fn stats_commands() {
    assert_eq!(json(&["stats", "corr", "-k", "1:1", "--T", "100"])["matrix"], serde_json::json!([[1.0]]));
    let corr = json(&["stats", "corr", "-k", "1:3", "--T", "300"]);
    assert_eq!(corr["pairs"].as_array().unwrap().len(), 3);
    assert_eq!(corr["pairs"][0]["fit"]["params"]["kind"], "linear");

    let census = json(&["stats", "outliers", "--imax", "10", "-k", "1:3"]);
    assert!(census["total"].is_u64());

    let lap = json(&["stats", "laplace", "-k", "1", "--T", "2500"]);
    assert!(lap["laplace"]["goodness"].as_f64() > lap["gaussian"]["goodness"].as_f64());
    assert!(lap["excess_kurtosis"].as_f64().unwrap() > 0.0);

    let hist = json(&["stats", "hist", "-k", "1", "--T", "20000", "--norm", "pdf"]);
    assert!(hist["mod6_dip_score"].as_f64().unwrap() >= 0.8);

    let zeros = json(&["stats", "zeros", "-k", "1:3", "--T", "20000"]);
    assert_eq!(zeros["fit"]["params"]["kind"], "exponential");
    assert_eq!(zeros["points"].as_array().unwrap().len(), 3);

    let rolling = stdout(&["stats", "rolling", "-k", "1", "--T", "1000", "-w", "500", "-y", "100", "--sign"]);
    let mut lines = rolling.lines();
    assert_eq!(lines.next(), Some("i,mean,variance"));
    let rows: Vec<u64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(rows, [500, 600, 700, 800, 900, 1000]);
}

#[test]
fn render_writes_image_and_meta() {
    let dir = tempfile::tempdir().unwrap();
    let meta = json(&[
        "--output-dir",
        dir.path().to_str().unwrap(),
        "render",
        "-k",
        "1:3",
        "-i",
        "1:300",
        "--style",
        "jet256",
        "--out",
        "g.ppm",
    ]);
    assert_eq!(meta["width"], 300);
    assert_eq!(meta["height"], 3 * 48 - 8);
    assert_eq!(meta["rows"][0]["k"], 3);
    assert_eq!(meta["rows"][2]["q_first"], 2);
    let bytes = std::fs::read(dir.path().join("g.ppm")).unwrap();
    assert!(bytes.starts_with(b"P6\n300 136\n255\n"));

    let one = dir.path().join("one.ppm");
    json(&["render", "-k", "1", "-i", "2:2", "--row-height", "1", "--gap", "0", "--out", one.to_str().unwrap()]);
    assert_eq!(std::fs::read(&one).unwrap(), b"P6\n1 1\n255\n\xff\x00\x00");
    assert!(Path::new(&one).exists());
}

#[test]
fn bad_ranges_rejected() {
    assert!(!run(&["pip", "-k", "1", "-i", "5:3"]).status.success());
    assert!(!run(&["pip", "-k", "1", "-i", "0:3"]).status.success());
    assert!(!run(&["daleth", "-k", "1", "-i", "1:3", "-h", "0"]).status.success());
}
