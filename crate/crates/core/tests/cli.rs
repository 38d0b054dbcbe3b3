use std::path::Path;
use std::process::{Command, Output};

use positroid_kp::cli::config::RunConfig;
use positroid_kp::cli::json::to_pretty;
use positroid_kp::le::{LeTableau, TableauJson};
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_positroid-kp");

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env_remove("POSITROID_KP_OUT")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

const GR492: &str = r#"{"example":"gr492","phases":["-2","-3/2","-1","-3/10","0","2/5","1","17/10","5/2"]}"#;

#[test]
fn example_gr24_writes_all_artifacts() {
    let tmp = TempDir::new().unwrap();
    let out = run(&["example", "gr24", "--out", "o"], tmp.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for f in [
        "config.json",
        "matrix.json",
        "divisor.json",
        "curve.svg",
        "soliton.csv",
        "soliton.svg",
        "soliton.json",
    ] {
        assert!(tmp.path().join("o/gr24").join(f).is_file(), "{f} missing");
    }
    let div: serde_json::Value = serde_json::from_str(&read(&tmp.path().join("o/gr24/divisor.json"))).unwrap();
    assert_eq!(div["checks"]["all"], serde_json::json!(true));
    assert_eq!(div["divisors"]["kp"]["degree"], serde_json::json!(4));
}

#[test]
fn matrix_for_gr492_is_tnn() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "c.json", GR492);
    let out = run(&["matrix", "--config", &cfg, "--out", "o"], tmp.path());
    assert_eq!(code(&out), 0);
    let m: serde_json::Value = serde_json::from_str(&read(&tmp.path().join("o/matrix.json"))).unwrap();
    assert_eq!(m["k"], serde_json::json!(4));
    assert_eq!(m["pivots"], serde_json::json!([1, 2, 4, 7]));
    assert_eq!(m["totally_nonnegative"], serde_json::json!(true));
    for minor in m["minors"].as_array().unwrap() {
        assert!(!minor["value"].as_str().unwrap().starts_with('-'));
    }
}

#[test]
fn empty_fill_gives_identity_block() {
    let tmp = TempDir::new().unwrap();
    let tab = r#"{"k":2,"n":4,"partition":[2,2],"fill":[[0,0],[0,0]],"weights":{}}"#;
    write_config(tmp.path(), "t.json", tab);
    let cfg = write_config(tmp.path(), "c.json", r#"{"tableau":"t.json","phases":[-3,-1,2,3]}"#);
    assert_eq!(code(&run(&["matrix", "--config", &cfg, "--out", "o"], tmp.path())), 0);
    let m: serde_json::Value = serde_json::from_str(&read(&tmp.path().join("o/matrix.json"))).unwrap();
    assert_eq!(m["matrix"], serde_json::json!([["1", "0", "0", "0"], ["0", "1", "0", "0"]]));
}

#[test]
fn negative_weight_is_rejected_with_location() {
    let tmp = TempDir::new().unwrap();
    let tab = r#"{"k":2,"n":4,"partition":[2,2],"fill":[[1,1],[1,1]],"weights":{"1,3":"1","1,4":"-2","2,3":"3/2","2,4":"1/3"}}"#;
    write_config(tmp.path(), "t.json", tab);
    let cfg = write_config(tmp.path(), "c.json", r#"{"tableau":"t.json","phases":[-3,-1,2,3]}"#);
    for cmd in ["matrix", "divisor", "soliton", "verify"] {
        let out = run(&[cmd, "--config", &cfg, "--out", "o"], tmp.path());
        assert_eq!(code(&out), 2, "{cmd}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("(1,4)"));
    }
}

#[test]
fn le_violation_exits_2() {
    let tmp = TempDir::new().unwrap();
    let tab = r#"{"k":2,"n":4,"partition":[2,2],"fill":[[1,0],[0,1]],"weights":{"1,3":"1","2,4":"1"}}"#;
    write_config(tmp.path(), "t.json", tab);
    let cfg = write_config(tmp.path(), "c.json", r#"{"tableau":"t.json","phases":[-3,-1,2,3]}"#);
    let out = run(&["matrix", "--config", &cfg], tmp.path());
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bad_configs_exit_2() {
    let tmp = TempDir::new().unwrap();
    let cases = [
        (
            "grid",
            r#"{"example":"gr24","phases":[-3,-1,2,3],"grid":{"x":[-1,1],"y":[-1,1],"nx":0,"ny":0}}"#,
        ),
        ("order", r#"{"example":"gr24","phases":[-3,2,-1,3]}"#),
        ("count", r#"{"example":"gr24","phases":[-3,-1,2]}"#),
        ("precision", r#"{"example":"gr24","phases":[-3,-1,2,3],"precision":32}"#),
        ("unknown", r#"{"example":"gr24","phases":[-3,-1,2,3],"colour":"red"}"#),
        ("syntax", r#"{"example":"gr24","#),
    ];
    for (name, body) in cases {
        let cfg = write_config(tmp.path(), &format!("{name}.json"), body);
        let out = run(&["soliton", "--config", &cfg, "--out", "o"], tmp.path());
        assert_eq!(code(&out), 2, "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(code(&run(&["matrix"], tmp.path())), 2, "missing config");
    assert_eq!(code(&run(&["frobnicate"], tmp.path())), 2, "unknown command");
}

#[test]
fn t0_failure_exits_3() {
    let tmp = TempDir::new().unwrap();
    let body = GR492.replace('}', r#","t0_max":0}"#);
    let cfg = write_config(tmp.path(), "c.json", &body);
    let out = run(&["divisor", "--config", &cfg, "--out", "o"], tmp.path());
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("precision"));

    let body = GR492.replace('}', r#","t0":0}"#);
    let cfg = write_config(tmp.path(), "d.json", &body);
    assert_eq!(code(&run(&["divisor", "--config", &cfg, "--out", "o"], tmp.path())), 3);
}

#[test]
fn outputs_are_deterministic() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        &GR492.replace('}', r#","grid":{"x":[-5,5],"y":[-5,5],"nx":17,"ny":13}}"#),
    );
    for dir in ["a", "b"] {
        for cmd in ["matrix", "divisor", "soliton", "verify"] {
            let out = run(&[cmd, "--config", &cfg, "--out", dir, "--seed", "7"], tmp.path());
            assert_eq!(code(&out), 0, "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        }
    }
    for f in [
        "matrix.json",
        "divisor.json",
        "soliton.json",
        "verify.json",
        "soliton.csv",
        "soliton.svg",
        "curve.svg",
    ] {
        assert_eq!(read(&tmp.path().join("a").join(f)), read(&tmp.path().join("b").join(f)), "{f}");
    }
}

#[test]
fn json_artifacts_round_trip() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&run(&["example", "gr492", "--out", "o"], tmp.path())), 0);
    let dir = tmp.path().join("o/gr492");
    for f in ["config.json", "matrix.json", "divisor.json", "soliton.json"] {
        let text = read(&dir.join(f));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(to_pretty(&v), text, "{f} is not a fixed point of parse and print");
        if let Some(t) = v.get("tableau") {
            let tj: TableauJson = serde_json::from_value(t.clone()).unwrap();
            let tab = LeTableau::try_from(tj).unwrap();
            assert_eq!(serde_json::to_value(tab.to_json()).unwrap(), *t, "{f}");
        }
    }
    let cfg = RunConfig::load(&dir.join("config.json")).unwrap();
    assert_eq!(
        cfg,
        RunConfig {
            base_dir: dir.clone(),
            ..RunConfig::example("gr492").unwrap()
        }
    );
}

#[test]
fn env_var_sets_default_out_dir() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "c.json", r#"{"example":"gr24","phases":[-3,-1,2,3]}"#);
    let out = Command::new(BIN)
        .args(["matrix", "--config", &cfg])
        .current_dir(tmp.path())
        .env("POSITROID_KP_OUT", tmp.path().join("from-env"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(tmp.path().join("from-env/matrix.json").is_file());

    let out = Command::new(BIN)
        .args(["matrix", "--config", &cfg, "--out", "flag"])
        .current_dir(tmp.path())
        .env("POSITROID_KP_OUT", tmp.path().join("from-env2"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(tmp.path().join("flag/matrix.json").is_file());
    assert!(!tmp.path().join("from-env2").exists());
}

#[test]
fn soliton_grid_csv_shape() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        r#"{"example":"gr24","phases":["-3","-1","2","3"],"grid":{"x":[-4,4],"y":[-2,2],"nx":5,"ny":3,"t":1}}"#,
    );
    assert_eq!(
        code(&run(&["soliton", "--config", &cfg, "--out", "o", "--precision", "106"], tmp.path())),
        0
    );
    let csv = read(&tmp.path().join("o/soliton.csv"));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,y,u");
    assert_eq!(lines.len(), 1 + 15);
    assert!(lines[1..]
        .iter()
        .all(|l| l.split(',').all(|c| c.parse::<f64>().unwrap().is_finite())));
    assert!(read(&tmp.path().join("o/soliton.svg")).starts_with("<svg"));
}

#[test]
fn verify_suite_passes() {
    let tmp = TempDir::new().unwrap();
    let out = run(&["verify", "--suite", "--out", "o"], tmp.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(code(&out), 0, "{stdout}");
    assert!(!stdout.contains("FAIL"));
    let report: serde_json::Value = serde_json::from_str(&read(&tmp.path().join("o/verify.json"))).unwrap();
    assert_eq!(report["passed"], serde_json::json!(true));
}
