//! End-to-end checks of the command surface: exit codes, artifact shapes,
//! record-schema conformance, and byte-exact replay.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

fn badform(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_badform"));
    cmd.args(args);
    cmd.env_remove("BADFORM_CACHE");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn exit_codes_match_failure_classes() {
    // success
    let ok = badform(&["bounds", "--m", "1", "--n", "1", "--c", "0.01"], &[]);
    assert_eq!(ok.status.code(), Some(0));
    // usage / parse failure (clap)
    let usage = badform(&["approx"], &[]);
    assert_eq!(usage.status.code(), Some(2));
    // precondition violation
    let pre = badform(&["approx", "--entries", "zzz"], &[]);
    assert_eq!(pre.status.code(), Some(2));
    let pre2 = badform(
        &["cover", "--entries", "phi", "--c", "0.05", "--t", "0.5"],
        &[],
    );
    assert_eq!(pre2.status.code(), Some(2));
    // numeric/search failure with a remediation hint
    let search = badform(
        &[
            "orbit",
            "--entries",
            "phi",
            "--t-max",
            "2",
            "--dt",
            "1",
            "--search-bound",
            "0",
        ],
        &[],
    );
    assert_eq!(search.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&search.stderr).contains("search-bound"));
}

#[test]
fn orbit_csv_artifact_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = badform(
        &[
            "orbit",
            "--entries",
            "phi",
            "--t-max",
            "2",
            "--dt",
            "0.25",
            "--cache",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let run_dir = find_single_run_dir(dir.path());
    let csv = std::fs::read_to_string(run_dir.join("orbit.csv")).unwrap();
    let lines: Vec<&str> = csv.trim().lines().collect();
    assert_eq!(lines[0], "t,delta,witness");
    assert_eq!(lines.len(), 1 + 9); // t = 0, 0.25, ..., 2.0
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3);
        fields[0].parse::<f64>().unwrap();
        fields[1].parse::<f64>().unwrap();
        assert!(fields[2].split(' ').all(|w| w.parse::<i64>().is_ok()));
    }
}

fn find_single_run_dir(cache: &Path) -> std::path::PathBuf {
    let mut dirs: Vec<_> = std::fs::read_dir(cache)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(dirs.len(), 1);
    dirs.pop().unwrap()
}

/// Structural validation against the shipped schema file: required keys,
/// const/enum/pattern/type constraints for the subset of JSON Schema the
/// schema uses, and the no-extra-keys rule.
#[test]
fn records_validate_against_shipped_schema() {
    let schema: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(
            Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/run-record.schema.json"),
        )
        .unwrap(),
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["bounds", "--m", "1", "--n", "2", "--c", "0.05"],
        vec!["approx", "--entries", "sqrt2", "--bound", "200"],
        vec![
            "game", "--m", "1", "--beta", "1/10", "--rounds", "6", "--seed", "3",
        ],
    ] {
        let mut full = args.clone();
        let cache = dir.path().join(args[0]);
        full.extend(["--cache", cache.to_str().unwrap()]);
        let out = badform(&full, &[]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        let record: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(find_single_run_dir(&cache).join("record.json")).unwrap(),
        )
        .unwrap();
        validate_object(&schema, &record);
    }
}

fn validate_object(schema: &serde_json::Value, doc: &serde_json::Value) {
    let obj = doc.as_object().expect("record is an object");
    let props = schema["properties"].as_object().unwrap();
    for req in schema["required"].as_array().unwrap() {
        assert!(
            obj.contains_key(req.as_str().unwrap()),
            "missing required key {req}"
        );
    }
    if schema["additionalProperties"] == serde_json::Value::Bool(false) {
        for key in obj.keys() {
            assert!(props.contains_key(key), "unexpected key {key}");
        }
    }
    for (key, rules) in props {
        let Some(value) = obj.get(key) else { continue };
        if let Some(ty) = rules["type"].as_str() {
            let ok = match ty {
                "string" => value.is_string(),
                "integer" => value.is_u64() || value.is_i64(),
                "object" => value.is_object(),
                _ => true,
            };
            assert!(ok, "key {key} has wrong type");
        }
        if let Some(c) = rules.get("const") {
            assert_eq!(value, c, "key {key} const mismatch");
        }
        if let Some(e) = rules.get("enum") {
            assert!(
                e.as_array().unwrap().contains(value),
                "key {key} not in enum"
            );
        }
        if let Some(pat) = rules["pattern"].as_str() {
            // the schema only uses the hex-digest pattern
            if pat.contains("[0-9a-f]{64}") {
                let s = value.as_str().unwrap();
                assert_eq!(s.len(), 64);
                assert!(s.chars().all(|c| c.is_ascii_hexdigit()));
            }
        }
        if let Some(extra) = rules.get("additionalProperties") {
            if let (Some(sub), Some(map)) = (extra.as_object(), value.as_object()) {
                for v in map.values() {
                    if sub.get("type").and_then(|t| t.as_str()) == Some("string") {
                        assert!(v.is_string());
                    }
                }
            }
        }
    }
}

#[test]
fn every_command_replays_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["approx", "--entries", "phi", "--bound", "500", "--c", "0.38"],
        vec![
            "orbit", "--entries", "1/2", "--t-max", "2", "--dt", "0.5",
        ],
        vec![
            "dani", "--entries", "phi", "--c", "0.37", "--t-max", "3", "--dt", "0.01",
        ],
        vec![
            "game", "--m", "1", "--beta", "1/10", "--rounds", "8", "--seed", "11", "--bob",
            "random",
        ],
        vec!["cantor", "--d", "1", "--beta", "1/20", "--depth", "2"],
        vec![
            "boxdim", "--set", "ek", "--k", "2", "--max-depth", "8",
        ],
        vec![
            "cover", "--entries", "phi", "--c", "0.1", "--depth", "2",
        ],
        vec!["bounds", "--m", "2", "--n", "1", "--c", "0.02"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let cache = dir.path().join(format!("run{i}"));
        let mut full = args.clone();
        full.extend(["--cache", cache.to_str().unwrap()]);
        let out = badform(&full, &[]);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stdout(&out));
        let record = find_single_run_dir(&cache).join("record.json");
        let replay = badform(&["replay", record.to_str().unwrap()], &[]);
        assert_eq!(
            replay.status.code(),
            Some(0),
            "replay of {args:?} failed: {}",
            String::from_utf8_lossy(&replay.stderr)
        );
        assert!(stdout(&replay).contains("byte for byte"));
    }
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("badform.conf");
    std::fs::write(
        &cfg,
        format!(
            "# defaults for this machine\ncache = {}\nsearch-bound = 1048576\n",
            dir.path().join("from-config").display()
        ),
    )
    .unwrap();
    // cache comes from the config file
    let out = badform(
        &[
            "bounds", "--m", "1", "--n", "1", "--c", "0.1", "--config",
            cfg.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("from-config").exists());
    // an explicit flag overrides the config value
    let out = badform(
        &[
            "bounds", "--m", "1", "--n", "1", "--c", "0.1", "--config",
            cfg.to_str().unwrap(), "--cache",
            dir.path().join("from-flag").to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("from-flag").exists());
}

#[test]
fn env_var_sets_default_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("envcache");
    let out = badform(
        &["bounds", "--m", "1", "--n", "1", "--c", "0.2"],
        &[("BADFORM_CACHE", cache.to_str().unwrap())],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(cache.exists());
}

#[test]
fn out_flag_writes_payload_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("result.json");
    let out = badform(
        &[
            "approx", "--entries", "1/2", "--bound", "10", "--out",
            path.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let payload: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(payload["constant"], serde_json::json!(0.0));
    let map: BTreeMap<String, serde_json::Value> =
        serde_json::from_value(payload.clone()).unwrap();
    assert!(map.contains_key("witness"));
}

#[test]
fn threads_do_not_change_the_answer() {
    let one = badform(
        &["approx", "--entries", "phi", "--bound", "3000", "--threads", "1"],
        &[],
    );
    let four = badform(
        &["approx", "--entries", "phi", "--bound", "3000", "--threads", "4"],
        &[],
    );
    assert_eq!(stdout(&one), stdout(&four));
}
