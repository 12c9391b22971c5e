//! Report envelope, config hash and artifact writing.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::commands::{Outcome, Table};
use crate::config::Common;
use crate::CliError;

/// The inputs that determine the results: command, seed, tolerance and the
/// resolved parameters. Thread count and output directory are left out.
pub fn canonical_config(command: &str, common: &Common, params: &Value) -> Value {
    json!({ "command": command, "seed": common.seed, "tolerance": common.tolerance, "params": params })
}

pub fn config_hash(config: &Value) -> String {
    let digest = Sha256::digest(serde_json::to_string(config).expect("json").as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn report(command: &str, common: &Common, outcome: &Outcome) -> Value {
    let config = canonical_config(command, common, &outcome.params);
    json!({
        "tool": "pphull",
        "version": pphull::VERSION,
        "command": command,
        "config_hash": config_hash(&config),
        "config": config,
        "result": outcome.result,
    })
}

fn csv_text(table: &Table, hash: &str) -> Result<String, CliError> {
    let io = |e: csv::Error| CliError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = table.header.clone();
    header.extend(["config_hash".to_string(), "version".to_string()]);
    w.write_record(&header).map_err(io)?;
    for row in &table.rows {
        let mut r = row.clone();
        r.extend([hash.to_string(), pphull::VERSION.to_string()]);
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf8"))
}

/// Renders everything first, then writes each file through a temporary name
/// so a failed run leaves no partial artifacts.
pub fn write(dir: &Path, command: &str, common: &Common, outcome: &Outcome) -> Result<Vec<PathBuf>, CliError> {
    let report = report(command, common, outcome);
    let hash = report["config_hash"].as_str().expect("hash").to_string();
    let mut files = vec![(format!("{command}.json"), serde_json::to_string_pretty(&report).expect("json") + "\n")];
    for t in &outcome.tables {
        files.push((format!("{}.csv", t.name), csv_text(t, &hash)?));
    }
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let mut written = Vec::new();
    for (name, text) in files {
        let path = dir.join(&name);
        let tmp = dir.join(format!(".{name}.tmp"));
        fs::write(&tmp, text).map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)?;
        written.push(path);
    }
    Ok(written)
}
