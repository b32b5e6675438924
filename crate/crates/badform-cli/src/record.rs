//! Run persistence: every cached run gets its own directory holding the
//! record (parameters, timestamps, payload, artifact hashes) plus the
//! artifacts themselves. Directories are never overwritten.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use badform::{Error, Result};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: &str = "run-record/1";

pub struct RunOutcome {
    /// Canonical result payload; replaying must reproduce these bytes.
    pub result: serde_json::Value,
    /// Named artifacts written alongside the record.
    pub artifacts: Vec<(String, String)>,
}

pub fn canonical_bytes(v: &serde_json::Value) -> Vec<u8> {
    serde_json::to_vec(v).expect("JSON is serializable")
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn now_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

/// Assembles the full record document.
pub fn record_json(
    command: &str,
    params: &BTreeMap<String, String>,
    outcome: &RunOutcome,
    started_ms: u128,
    finished_ms: u128,
) -> serde_json::Value {
    let mut artifact_hashes = serde_json::Map::new();
    for (name, contents) in &outcome.artifacts {
        artifact_hashes.insert(
            name.clone(),
            serde_json::Value::String(sha256_hex(contents.as_bytes())),
        );
    }
    serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "parameters": params,
        "result": outcome.result,
        "result_sha256": sha256_hex(&canonical_bytes(&outcome.result)),
        "started_unix_ms": started_ms as u64,
        "finished_unix_ms": finished_ms as u64,
        "artifacts": artifact_hashes,
    })
}

/// Writes `record.json` plus artifacts under `<cache>/<millis>-<hash8>/`,
/// suffixing the directory name if it already exists.
pub fn persist(
    cache: &Path,
    command: &str,
    params: &BTreeMap<String, String>,
    outcome: &RunOutcome,
    started_ms: u128,
) -> Result<PathBuf> {
    let finished_ms = now_ms();
    let config_hash = sha256_hex(&canonical_bytes(&serde_json::json!({
        "command": command,
        "parameters": params,
    })));
    let io_err = |e: std::io::Error| Error::DegenerateInput(format!("cache write failed: {e}"));
    std::fs::create_dir_all(cache).map_err(io_err)?;
    let mut dir = cache.join(format!("{started_ms}-{}", &config_hash[..8]));
    let mut suffix = 0u32;
    while dir.exists() {
        suffix += 1;
        dir = cache.join(format!("{started_ms}-{}-{suffix}", &config_hash[..8]));
    }
    std::fs::create_dir(&dir).map_err(io_err)?;
    let record = record_json(command, params, outcome, started_ms, finished_ms);
    std::fs::write(
        dir.join("record.json"),
        serde_json::to_vec_pretty(&record).expect("serializable"),
    )
    .map_err(io_err)?;
    for (name, contents) in &outcome.artifacts {
        std::fs::write(dir.join(name), contents).map_err(io_err)?;
    }
    Ok(dir)
}

pub struct LoadedRecord {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub result: serde_json::Value,
}

pub fn load(path: &Path) -> Result<LoadedRecord> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::DegenerateInput(format!("cannot read record: {e}")))?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::DegenerateInput(format!("record is not JSON: {e}")))?;
    if v["schema_version"].as_str() != Some(SCHEMA_VERSION) {
        return Err(Error::DegenerateInput(format!(
            "unsupported record schema {:?}",
            v["schema_version"]
        )));
    }
    let command = v["command"]
        .as_str()
        .ok_or_else(|| Error::DegenerateInput("record has no command".into()))?
        .to_string();
    let mut parameters = BTreeMap::new();
    if let Some(map) = v["parameters"].as_object() {
        for (k, val) in map {
            let s = val
                .as_str()
                .ok_or_else(|| Error::DegenerateInput("non-string parameter".into()))?;
            parameters.insert(k.clone(), s.to_string());
        }
    }
    Ok(LoadedRecord {
        command,
        parameters,
        result: v["result"].clone(),
    })
}
