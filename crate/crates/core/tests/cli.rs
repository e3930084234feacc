use std::process::{Command, Output};

fn wellspread(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wellspread")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_round_trips_through_file_spec() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("frucht.txt");
    let o = wellspread(&["generate", "--graph", "frucht", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let spec = format!("file:{}", path.display());
    let o = wellspread(&["sample", "--graph", &spec, "--start", "1", "--k", "3"]);
    assert!(o.status.success());
    let seq: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(seq["vertices"].as_array().unwrap().len(), 3);
    assert_eq!(seq["vertices"][0], 1);
}

#[test]
fn w1_against_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let mu = dir.path().join("mu.json");
    std::fs::write(&mu, "[0.5, 0, 0, 0.5, 0, 0]").unwrap();
    let o = wellspread(&["w1", "--graph", "cycle:6", "--mu", mu.to_str().unwrap()]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((r["cost"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(r["dual"].as_array().unwrap().len(), 6);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let mu = dir.path().join("mu.json");
    let nu = dir.path().join("nu.json");
    std::fs::write(&mu, "[1, 0, 0, 0]").unwrap();
    std::fs::write(&nu, "[0, 0, 0, 0.5]").unwrap();
    let o = wellspread(&["w1", "--graph", "cycle:4", "--mu", mu.to_str().unwrap(), "--nu", nu.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    assert_eq!(wellspread(&["generate", "--graph", "petersen"]).status.code(), Some(2));
    assert_eq!(wellspread(&["generate", "--graph", "cycle:2"]).status.code(), Some(2));
    assert_eq!(wellspread(&["sample", "--graph", "cycle:5", "--start", "9"]).status.code(), Some(2));
    assert_eq!(wellspread(&["table", "--graph", "cycle:5", "--k", "6"]).status.code(), Some(2));
    assert_eq!(wellspread(&["bogus"]).status.code(), Some(2));
    assert_eq!(wellspread(&["generate", "--graph", "file:/nonexistent/graph.txt"]).status.code(), Some(2));
}

#[test]
fn table_is_byte_deterministic() {
    let args = ["table", "--graph", "frucht", "--trials", "100", "--seed", "7", "--k", "1,2,5"];
    let a = wellspread(&args);
    let b = wellspread(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("# graph=frucht n=12 alpha=0.5 trials=100 seed=7\n"));
    assert_eq!(text.lines().count(), 2 + 12 * 3);
    assert!(text.contains("\n1,1,2.00,"));
}

#[test]
fn spectrum_cache_is_written_then_checked() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c8.json");
    let cache = cache.to_str().unwrap();
    let first = wellspread(&["bound", "--graph", "cycle:8", "--spectrum", cache, "--format", "csv"]);
    assert!(first.status.success());
    assert!(std::path::Path::new(cache).exists());
    let second = wellspread(&["bound", "--graph", "cycle:8", "--spectrum", cache, "--format", "csv"]);
    assert_eq!(first.stdout, second.stdout);
    let wrong = wellspread(&["bound", "--graph", "path:8", "--spectrum", cache]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn combined_bound_and_figures() {
    let dir = tempfile::tempdir().unwrap();
    let mu = dir.path().join("mu.json");
    std::fs::write(&mu, "[1, 0, 0, 0, 0, 0, 0, 0, 0, 0]").unwrap();
    let o = wellspread(&["bound", "--graph", "cycle:10", "--mu", mu.to_str().unwrap()]);
    assert!(o.status.success());
    let b: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(b["value"].as_f64().unwrap() >= 2.5 - 1e-6);

    let o = wellspread(&["figure", "potential", "--n", "20"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 21);
    assert!(text.lines().nth(1).unwrap().ends_with(','));

    let o = wellspread(&["figure", "tightness", "--graph", "cycle:12", "--format", "json"]);
    assert!(o.status.success());
    let pts: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(pts.as_array().unwrap().len(), 6);
}
