//! Leaderboard CSV files and JSON reports.
//!
//! A leaderboard is UTF-8 CSV: the header row names the tasks (its first cell
//! is a free label), every following row starts with a model name, and each
//! remaining cell is a decimal score or empty for a missing score.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::benchmark::ScoreMatrix;
use crate::error::{Error, Result};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(row: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        row,
        column,
        message: message.into(),
    }
}

/// Parses leaderboard CSV text. Rows and columns in errors are 1-based, with
/// the header as row 1.
pub fn parse_leaderboard(text: &str) -> Result<ScoreMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut records = reader.records();
    let header = match records.next() {
        Some(Ok(h)) => h,
        Some(Err(e)) => return Err(parse_err(1, 1, e.to_string())),
        None => return Err(parse_err(1, 1, "file is empty")),
    };
    if header.len() < 2 {
        return Err(parse_err(1, 1, "header must name at least one task"));
    }
    let tasks: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut seen_tasks = std::collections::HashSet::new();
    for (j, t) in tasks.iter().enumerate() {
        if t.is_empty() {
            return Err(parse_err(1, j + 2, "empty task name"));
        }
        if !seen_tasks.insert(t.as_str()) {
            return Err(parse_err(1, j + 2, format!("duplicate task name {t:?}")));
        }
    }

    let mut models = Vec::new();
    let mut seen_models = std::collections::HashSet::new();
    let mut cells = Vec::new();
    for (idx, record) in records.enumerate() {
        let row = idx + 2;
        let record = record.map_err(|e| parse_err(row, 1, e.to_string()))?;
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != tasks.len() + 1 {
            return Err(parse_err(
                row,
                record.len().min(tasks.len() + 1),
                format!(
                    "expected {} fields, found {}",
                    tasks.len() + 1,
                    record.len()
                ),
            ));
        }
        let name = &record[0];
        if name.is_empty() {
            return Err(parse_err(row, 1, "empty model name"));
        }
        if !seen_models.insert(name.to_string()) {
            return Err(parse_err(row, 1, format!("duplicate model name {name:?}")));
        }
        models.push(name.to_string());
        for (j, cell) in record.iter().skip(1).enumerate() {
            if cell.is_empty() {
                cells.push(None);
                continue;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => cells.push(Some(v)),
                _ => {
                    return Err(parse_err(
                        row,
                        j + 2,
                        format!("not a finite number: {cell:?}"),
                    ))
                }
            }
        }
    }
    if models.is_empty() {
        return Err(parse_err(2, 1, "no model rows"));
    }
    ScoreMatrix::new(models, tasks, cells)
}

pub fn load_leaderboard(path: impl AsRef<Path>) -> Result<ScoreMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_leaderboard(&text)
}

/// Serializes a score matrix in leaderboard format.
pub fn leaderboard_to_string(scores: &ScoreMatrix) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("model").chain(scores.task_names().iter().map(String::as_str));
    // writing into a Vec cannot fail
    writer.write_record(header).expect("in-memory write");
    for (i, name) in scores.model_names().iter().enumerate() {
        let cells = (0..scores.tasks())
            .map(|j| scores.get(i, j).map(|v| v.to_string()).unwrap_or_default());
        writer
            .write_record(std::iter::once(name.clone()).chain(cells))
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Writes `bytes` to a sibling temporary file, then renames it into place.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let name = path
        .file_name()
        .ok_or_else(|| Error::invalid(format!("{} is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp: PathBuf = path.with_file_name(tmp_name);
    let result = (|| {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io_err(path))
}

pub fn save_leaderboard(scores: &ScoreMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path, leaderboard_to_string(scores).as_bytes())
}

pub fn write_json<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}
