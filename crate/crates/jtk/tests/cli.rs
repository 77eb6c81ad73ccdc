use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const COMMANDS: [&str; 6] = ["koszul", "jfunction", "jcoeffs", "localcohom", "structure", "verify"];

fn instance(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(name)
}

fn jtk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jtk")).args(args).output().unwrap()
}

fn jtk_on(cmd: &str, file: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--input", file.to_str().unwrap()];
    args.extend_from_slice(extra);
    jtk(&args)
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn every_command_succeeds_on_the_shipped_instances() {
    for name in ["xz_q1.jtk", "maximal_ideal.jtk", "two_planes.jtk", "line_and_plane.jtk"] {
        for cmd in COMMANDS {
            let o = jtk_on(cmd, &instance(name), &[]);
            assert_eq!(o.status.code(), Some(0), "{cmd} {name}: {}", String::from_utf8_lossy(&o.stderr));
            let doc = json(&o);
            assert_eq!(doc["schema"], "jtk-report/1");
            assert_eq!(doc["command"], cmd);
            assert_eq!(doc["diagnostics"], Value::Array(vec![]));
        }
    }
}

#[test]
fn xz_series_from_the_command_line() {
    let doc = json(&jtk_on("jfunction", &instance("xz_q1.jtk"), &["--max-degree", "12"]));
    assert_eq!(doc["results"]["series"]["text"], "t/(1-t)");
    assert_eq!(doc["results"]["psi"].as_array().unwrap().len(), 13);
    let doc = json(&jtk_on("jcoeffs", &instance("maximal_ideal.jtk"), &[]));
    assert_eq!(doc["results"]["j"][0], 1);
    assert_eq!(doc["results"]["j"][1], -1);
    assert_eq!(doc["results"]["routes_agree"], true);
}

#[test]
fn seq_selection() {
    let doc = json(&jtk_on("koszul", &instance("two_planes.jtk"), &["--seq", "q"]));
    assert_eq!(doc["instance"]["seq"], "q");
    assert_eq!(doc["instance"]["r"], 3);
    let o = jtk_on("koszul", &instance("two_planes.jtk"), &["--seq", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_input_exits_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_tmp(&dir, "bad.jtk", "ring R = GF(5)[x,y];\nseq s = (x, y^2 + x);\n");
    let o = jtk_on("koszul", &bad, &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.jtk:2:13: inhomogeneous element"), "{err}");
    assert!(o.stdout.is_empty());

    let o = jtk_on("koszul", &dir.path().join("missing.jtk"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(jtk(&["koszul"]).status.code(), Some(2));
}

#[test]
fn diagnostics_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(instance("line_and_plane.jtk")).unwrap() + "assert unmixed R;\n";
    let p = write_tmp(&dir, "mixed.jtk", &text);
    let o = jtk_on("localcohom", &p, &[]);
    assert_eq!(o.status.code(), Some(1));
    let doc = json(&o);
    assert_eq!(doc["results"]["unmixedness"]["unmixed"], false);
    assert!(!doc["diagnostics"].as_array().unwrap().is_empty());
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn reports_are_deterministic() {
    for cmd in COMMANDS {
        let a = without_timing(json(&jtk_on(cmd, &instance("two_planes.jtk"), &["--seed", "3"])));
        let b = without_timing(json(&jtk_on(cmd, &instance("two_planes.jtk"), &["--seed", "3"])));
        assert_eq!(a, b, "{cmd}");
        assert_eq!(a["seed"], 3);
    }
}

#[test]
fn table_matches_json() {
    for cmd in ["jcoeffs", "localcohom"] {
        let doc = json(&jtk_on(cmd, &instance("two_planes.jtk"), &[]));
        let o = jtk_on(cmd, &instance("two_planes.jtk"), &["--format", "table"]);
        let table = String::from_utf8(o.stdout).unwrap();
        let row = |key: &str| -> String {
            table
                .lines()
                .find_map(|l| l.strip_prefix(key).filter(|r| r.starts_with(' ')).map(|r| r.trim().to_string()))
                .unwrap_or_else(|| panic!("no row {key}"))
        };
        assert_eq!(row("command"), cmd);
        match cmd {
            "jcoeffs" => {
                let j: Vec<String> = doc["results"]["j"].as_array().unwrap().iter().map(|v| v.to_string()).collect();
                assert_eq!(row("results.j"), format!("[{}]", j.join(", ")));
                assert_eq!(row("results.series.text"), doc["results"]["series"]["text"].as_str().unwrap());
            }
            _ => {
                assert_eq!(row("results.report.dim"), doc["results"]["report"]["dim"].to_string());
                assert_eq!(row("results.report.h"), "[1, 1, 0]");
            }
        }
    }
}

#[test]
fn out_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = jtk_on("localcohom", &instance("maximal_ideal.jtk"), &["--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(doc["results"]["report"]["h"][1], 1);
}

#[test]
fn hunt_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("h{threads}.jsonl"));
        let o = Command::new(env!("CARGO_BIN_EXE_jtk"))
            .args(["hunt", "--count", "60", "--seed", "5", "--out", out.to_str().unwrap()])
            .env("JTK_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        let doc = json(&o);
        assert_eq!(doc["results"]["instances"], 60);
        assert!(doc.get("records").is_none());
        files.push(std::fs::read_to_string(out).unwrap());
    }
    assert_eq!(files[0], files[1]);
    for line in files[0].lines() {
        let rec: Value = serde_json::from_str(line).unwrap();
        assert_eq!(rec["probe"]["amenable"], true);
        assert_eq!(rec["probe"]["d_sequence"], true);
    }
    // without --out the records are embedded
    let doc = json(&jtk(&["hunt", "--count", "60", "--seed", "5"]));
    assert_eq!(doc["records"].as_array().unwrap().len(), files[0].lines().count());
}

fn schema() -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn required<'a>(schema: &'a Value, def: &str) -> Vec<&'a str> {
    schema["$defs"][def]["required"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect()
}

fn has_keys(v: &Value, keys: &[&str]) -> bool {
    keys.iter().all(|k| v.get(k).is_some())
}

#[test]
fn reports_carry_the_schema_keys() {
    let s = schema();
    assert_eq!(s["$id"], "jtk-report/1");
    let top = required(&s, "instanceReport");
    for cmd in COMMANDS {
        for name in ["xz_q0.jtk", "two_planes.jtk"] {
            let doc = json(&jtk_on(cmd, &instance(name), &[]));
            let obj = doc.as_object().unwrap();
            assert!(has_keys(&doc, &top), "{cmd}: {doc}");
            assert_eq!(obj.len(), top.len(), "{cmd}: extra keys");
            assert!(has_keys(&doc["instance"], &["ring", "module", "seq", "r", "text"]));
            let r = &doc["results"];
            let def = match cmd {
                "koszul" => Some("koszulResults"),
                "jfunction" => Some("routeA"),
                "jcoeffs" => Some("jcoeffsResults"),
                "localcohom" => Some("localResults"),
                "verify" => Some("verifyResults"),
                _ => None,
            };
            if let Some(def) = def {
                assert!(has_keys(r, &required(&s, def)), "{cmd} {name}: {r}");
            }
        }
    }
    let doc = json(&jtk(&["hunt", "--count", "10"]));
    assert!(has_keys(&doc, &required(&s, "huntReport")));
    assert!(has_keys(
        &doc["results"],
        &s["$defs"]["huntReport"]["properties"]["results"]["required"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap())
            .collect::<Vec<_>>()
    ));
    for rec in doc["records"].as_array().unwrap() {
        assert!(has_keys(rec, &required(&s, "record")));
        assert!(has_keys(&rec["probe"], &required(&s, "probe")));
    }
}
