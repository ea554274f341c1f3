//! Dataset and point files. A dataset file is JSON Lines: one header line
//! with the [`Metadata`], then one [`DatasetRecord`] per line in key order.

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use g2ml_core::dataset::{Dataset, DatasetRecord, Metadata, SCHEMA};
use g2ml_core::igusa::ModuliPoint;

use crate::{Error, Result};

/// Writes `bytes` to a temporary sibling and renames it into place, creating
/// parent directories as needed.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let name = path.file_name().ok_or_else(|| Error::Usage(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let res = fs::File::create(&tmp).and_then(|mut f| {
        f.write_all(bytes)?;
        f.sync_all()
    });
    if let Err(e) = res.and_then(|_| fs::rename(&tmp, path)) {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn dataset_to_string(d: &Dataset) -> Result<String> {
    let mut s = serde_json::to_string(&d.meta)?;
    s.push('\n');
    for r in d.records() {
        s.push_str(&serde_json::to_string(r)?);
        s.push('\n');
    }
    Ok(s)
}

/// Parses a dataset file; `path` only labels error messages. Records that
/// share a key are merged.
pub fn dataset_from_reader(r: impl BufRead, path: &Path) -> Result<Dataset> {
    let err = |line: usize, message: String| Error::Parse { path: path.to_path_buf(), line, message };
    let mut d: Option<Dataset> = None;
    for (i, line) in r.lines().enumerate() {
        let n = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        match &mut d {
            None => {
                let meta: Metadata = serde_json::from_str(&line).map_err(|e| err(n, format!("header: {e}")))?;
                if meta.schema != SCHEMA {
                    return Err(g2ml_core::Error::SchemaMismatch(meta.schema).into());
                }
                d = Some(Dataset::new(meta));
            }
            Some(d) => {
                let rec: DatasetRecord = serde_json::from_str(&line).map_err(|e| err(n, e.to_string()))?;
                d.insert(rec).map_err(|e| err(n, e.to_string()))?;
            }
        }
    }
    d.ok_or_else(|| err(1, "missing header line".into()))
}

pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    dataset_from_reader(std::io::BufReader::new(f), path)
}

pub fn write_dataset(path: &Path, d: &Dataset) -> Result<()> {
    write_atomic(path, dataset_to_string(d)?.as_bytes())
}

pub fn points_to_string(points: &[ModuliPoint]) -> Result<String> {
    let mut s = String::new();
    for p in points {
        s.push_str(&serde_json::to_string(p)?);
        s.push('\n');
    }
    Ok(s)
}

pub fn points_from_str(text: &str, path: &Path) -> Result<Vec<ModuliPoint>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse { path: path.to_path_buf(), line: i + 1, message: e.to_string() })
        })
        .collect()
}
