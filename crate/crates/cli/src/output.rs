use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

pub const MANIFEST: &str = "manifest.json";

/// An output directory plus the data files written into it.
pub struct Outputs {
    dir: PathBuf,
    written: Vec<String>,
}

impl Outputs {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(CliError::io(dir))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn text(&mut self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        fs::write(&path, body).map_err(CliError::io(&path))?;
        self.record(name);
        Ok(path)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut body = serde_json::to_string_pretty(value).expect("outputs serialize");
        body.push('\n');
        self.text(name, &body)
    }

    /// Note a file written by other means (e.g. a snapshot writer).
    pub fn record(&mut self, name: &str) {
        if !self.written.iter().any(|w| w == name) {
            self.written.push(name.to_string());
        }
    }

    /// Manifest with the fully resolved parameters. Only `created_unix`
    /// varies between identical runs.
    pub fn finish(self, command: &str, seed: u64, resolved: Value) -> Result<Vec<String>, CliError> {
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let manifest = json!({
            "command": command,
            "seed": seed,
            "config": resolved,
            "versions": {
                "semwave-core": semwave_core::VERSION,
                "semwave-cli": env!("CARGO_PKG_VERSION"),
            },
            "outputs": self.written,
            "created_unix": created,
        });
        let path = self.dir.join(MANIFEST);
        let mut body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        body.push('\n');
        fs::write(&path, body).map_err(CliError::io(&path))?;
        Ok(self.written)
    }
}

/// Shortest round-trip decimal for a float; used in every CSV we write.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// CSV with standard quoting, for rows that may carry arbitrary tokens.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}
