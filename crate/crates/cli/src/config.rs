//! Layered configuration: a TOML or JSON file, then command-line overrides,
//! deserialized into each subcommand's parameter struct.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::error::CliError;

/// Keys handled by the runner itself rather than a subcommand.
pub const RUNNER_KEYS: [&str; 3] = ["command", "seed", "out"];

pub fn load_file(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let parsed = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => serde_json::from_str(&text).map_err(|e| e.to_string()),
        Some("toml") => toml::from_str::<Value>(&text).map_err(|e| e.to_string()),
        _ => serde_json::from_str(&text).or_else(|_| toml::from_str::<Value>(&text).map_err(|e| e.to_string())),
    };
    let value = parsed.map_err(|reason| CliError::config(path.display().to_string(), reason))?;
    if !value.is_object() {
        return Err(CliError::config(path.display().to_string(), "top level must be a table/object"));
    }
    Ok(value)
}

/// Set `dotted.key` inside `root`, creating intermediate tables.
pub fn set_path(root: &mut Value, key: &str, value: Value) -> Result<(), CliError> {
    let mut cur = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(CliError::Usage(format!("empty segment in key `{key}`")));
        }
        if !cur.is_object() {
            *cur = Value::Object(Map::new());
        }
        let obj = cur.as_object_mut().expect("object");
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        cur = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Map::new()));
    }
    Ok(())
}

/// Parse `KEY=VALUE`; the value is read as JSON when it parses, else as a string.
pub fn parse_assignment(raw: &str) -> Result<(String, Value), CliError> {
    let (k, v) = raw
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{raw}`")))?;
    let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
    Ok((k.trim().to_string(), value))
}

pub fn strip_runner_keys(value: &Value) -> Value {
    let mut v = value.clone();
    if let Some(obj) = v.as_object_mut() {
        for k in RUNNER_KEYS {
            obj.remove(k);
        }
    }
    v
}

/// Deserialize with the failing field path reported, e.g. `grid.n`.
pub fn extract<T: DeserializeOwned>(value: &Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(strip_runner_keys(value)).map_err(|e| {
        let path = e.path().to_string();
        let param = if path == "." { "<root>".to_string() } else { path };
        CliError::config(param, e.into_inner().to_string())
    })
}
