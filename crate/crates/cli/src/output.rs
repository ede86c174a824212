//! Plain, CSV and JSON emission with atomic file writes.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Plain,
    Csv,
    Json,
}

/// Rows that know how to print themselves for humans.
pub trait PlainRow {
    fn plain(&self) -> String;
}

pub fn render<T: Serialize + PlainRow>(rows: &[T], format: OutputFormat) -> Result<String, String> {
    match format {
        OutputFormat::Plain => {
            let mut s = String::new();
            for r in rows {
                let _ = writeln!(s, "{}", r.plain());
            }
            Ok(s)
        }
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            String::from_utf8(bytes).map_err(|e| e.to_string())
        }
    }
}

/// Writes `text` to `path` through a temporary file in the same directory,
/// renamed into place only once fully written; stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), String> {
    let Some(path) = path else {
        print!("{text}");
        return Ok(());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| format!("cannot create temporary file in {}: {e}", dir.display()))?;
    tmp.write_all(text.as_bytes())
        .and_then(|_| tmp.as_file().sync_all())
        .map_err(|e| format!("write failed: {e}"))?;
    tmp.persist(path)
        .map_err(|e| format!("cannot move output to {}: {}", path.display(), e.error))?;
    Ok(())
}
