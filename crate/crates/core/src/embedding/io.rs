//! Embedding file formats.
//!
//! - `jsonl`: one object per line, `{"token": "...", "vector": [..]}`.
//! - `csv`: `token,c0,c1,...` per record, no header; standard quoting rules.
//! - `binary`: magic `SEMW`, `u32` version, `u32` dim, `u64` count, then per
//!   entry a `u32` byte length, the UTF-8 token and `dim` little-endian `f64`s.
//!   All integers are little-endian.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{EmbeddingError, EmbeddingSet, EmbeddingVector};

pub const BINARY_MAGIC: &[u8; 4] = b"SEMW";
pub const BINARY_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingFormat {
    Jsonl,
    Csv,
    Binary,
}

impl EmbeddingFormat {
    /// Guess from a file extension (`.jsonl`, `.csv`, `.bin`/`.semw`).
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "jsonl" | "ndjson" => Some(Self::Jsonl),
            "csv" => Some(Self::Csv),
            "bin" | "semw" => Some(Self::Binary),
            _ => None,
        }
    }
}

impl FromStr for EmbeddingFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" => Ok(Self::Jsonl),
            "csv" => Ok(Self::Csv),
            "binary" | "bin" => Ok(Self::Binary),
            other => Err(format!("unknown embedding format {other:?}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonlRow {
    token: String,
    vector: Vec<f64>,
}

fn model_id_for(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn load_embeddings(path: &Path, format: EmbeddingFormat) -> Result<EmbeddingSet, EmbeddingError> {
    let file = File::open(path).map_err(|e| EmbeddingError::io(path, e))?;
    let reader = BufReader::new(file);
    let model_id = model_id_for(path);
    match format {
        EmbeddingFormat::Jsonl => read_jsonl(path, reader, model_id),
        EmbeddingFormat::Csv => read_csv(path, reader, model_id),
        EmbeddingFormat::Binary => read_binary(path, reader, model_id),
    }
}

fn parse_err(path: &Path, line: usize, reason: impl ToString) -> EmbeddingError {
    EmbeddingError::Parse {
        path: path.to_path_buf(),
        line,
        reason: reason.to_string(),
    }
}

fn read_jsonl(path: &Path, reader: impl BufRead, model_id: String) -> Result<EmbeddingSet, EmbeddingError> {
    let mut set = EmbeddingSet::new(model_id, 0);
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| EmbeddingError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row: JsonlRow = serde_json::from_str(&line).map_err(|e| parse_err(path, lineno, e))?;
        let vector = EmbeddingVector::new(row.vector).map_err(|e| parse_err(path, lineno, e))?;
        set.insert(row.token, vector)?;
    }
    Ok(set)
}

fn read_csv(path: &Path, reader: impl Read, model_id: String) -> Result<EmbeddingSet, EmbeddingError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut set = EmbeddingSet::new(model_id, 0);
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(path, line, e)
        })?;
        let lineno = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let mut fields = record.iter();
        let token = fields
            .next()
            .ok_or_else(|| parse_err(path, lineno, "empty record"))?
            .to_string();
        let values = fields
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| parse_err(path, lineno, e))?;
        let vector = EmbeddingVector::new(values).map_err(|e| parse_err(path, lineno, e))?;
        set.insert(token, vector)?;
    }
    Ok(set)
}

fn read_binary(path: &Path, mut reader: impl Read, model_id: String) -> Result<EmbeddingSet, EmbeddingError> {
    let bad = |reason: &str| EmbeddingError::BadBinary {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };
    let mut header = [0u8; 20];
    reader
        .read_exact(&mut header)
        .map_err(|_| bad("truncated header"))?;
    if &header[..4] != BINARY_MAGIC {
        return Err(bad("bad magic"));
    }
    let version = u32::from_le_bytes(header[4..8].try_into().unwrap());
    if version != BINARY_VERSION {
        return Err(bad(&format!("unsupported version {version}")));
    }
    let dim = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
    let count = u64::from_le_bytes(header[12..20].try_into().unwrap());
    let mut set = EmbeddingSet::new(model_id, dim);
    let mut buf4 = [0u8; 4];
    let mut buf8 = [0u8; 8];
    for _ in 0..count {
        reader.read_exact(&mut buf4).map_err(|_| bad("truncated entry"))?;
        let len = u32::from_le_bytes(buf4) as usize;
        let mut token = vec![0u8; len];
        reader.read_exact(&mut token).map_err(|_| bad("truncated token"))?;
        let token = String::from_utf8(token).map_err(|_| bad("token is not valid UTF-8"))?;
        let mut values = Vec::with_capacity(dim);
        for _ in 0..dim {
            reader.read_exact(&mut buf8).map_err(|_| bad("truncated vector"))?;
            values.push(f64::from_le_bytes(buf8));
        }
        let vector = EmbeddingVector::new(values).map_err(|e| bad(&e.to_string()))?;
        set.insert(token, vector)?;
    }
    Ok(set)
}

pub fn save_embeddings(set: &EmbeddingSet, path: &Path, format: EmbeddingFormat) -> Result<(), EmbeddingError> {
    let file = File::create(path).map_err(|e| EmbeddingError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| EmbeddingError::io(path, e);
    match format {
        EmbeddingFormat::Jsonl => {
            for (token, vector) in set.iter() {
                let row = JsonlRow {
                    token: token.to_string(),
                    vector: vector.values().to_vec(),
                };
                let line = serde_json::to_string(&row).expect("rows always serialize");
                writeln!(w, "{line}").map_err(io)?;
            }
        }
        EmbeddingFormat::Csv => {
            let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(&mut w);
            for (token, vector) in set.iter() {
                let mut record = vec![token.to_string()];
                record.extend(vector.values().iter().map(|v| format!("{v:?}")));
                wtr.write_record(&record)
                    .map_err(|e| EmbeddingError::io(path, e.into()))?;
            }
            wtr.flush().map_err(io)?;
        }
        EmbeddingFormat::Binary => {
            w.write_all(BINARY_MAGIC).map_err(io)?;
            w.write_all(&BINARY_VERSION.to_le_bytes()).map_err(io)?;
            w.write_all(&(set.dim() as u32).to_le_bytes()).map_err(io)?;
            w.write_all(&(set.len() as u64).to_le_bytes()).map_err(io)?;
            for (token, vector) in set.iter() {
                w.write_all(&(token.len() as u32).to_le_bytes()).map_err(io)?;
                w.write_all(token.as_bytes()).map_err(io)?;
                for v in vector.values() {
                    w.write_all(&v.to_le_bytes()).map_err(io)?;
                }
            }
        }
    }
    w.flush().map_err(io)
}
