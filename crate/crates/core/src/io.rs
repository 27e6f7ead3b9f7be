//! CSV plumbing shared by the loaders and writers.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};

pub(crate) fn open_csv(path: &Path) -> Result<(String, csv::Reader<File>)> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok((name, csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file)))
}

pub(crate) fn reader_from<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader)
}

/// Deserializes every row, pairing it with its 1-based line number. The
/// header must name every column in `required`.
pub(crate) fn read_rows<T, R>(file: &str, reader: &mut csv::Reader<R>, required: &[&str]) -> Result<Vec<(u64, T)>>
where
    T: DeserializeOwned,
    R: Read,
{
    let headers = reader
        .headers()
        .map_err(|e| malformed(file, 1, e))?
        .clone();
    for col in required {
        if !headers.iter().any(|h| h == *col) {
            return Err(malformed(file, 1, format!("header lacks column {col:?}")));
        }
    }
    let mut rows = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {
                let line = record.position().map_or(0, |p| p.line());
                let row = record
                    .deserialize(Some(&headers))
                    .map_err(|e| malformed(file, line, e))?;
                rows.push((line, row));
            }
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                return Err(malformed(file, line, e));
            }
        }
    }
    Ok(rows)
}

pub(crate) fn malformed(file: &str, line: u64, e: impl std::fmt::Display) -> Error {
    Error::MalformedRow {
        file: file.to_string(),
        line,
        message: e.to_string(),
    }
}

/// Renders rows into CSV text.
pub(crate) fn to_csv<S: serde::Serialize>(rows: impl IntoIterator<Item = S>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::Stats(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Stats(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(contents.as_bytes()).map_err(|e| Error::io(path, e))
}
