//! Report envelopes and serialization: JSON with a command echo, and
//! plot-ready CSV with full-precision numerics.

use crate::error::Result;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Serialize)]
pub struct Envelope {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input: String,
    pub seed: Option<u64>,
    pub pass: bool,
    pub payload: serde_json::Value,
}

impl Envelope {
    pub fn new(command: &str, input: &str, seed: Option<u64>, pass: bool, payload: serde_json::Value) -> Self {
        Self {
            tool: "hodgekit",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            input: input.to_string(),
            seed,
            pass,
            payload,
        }
    }
}

/// A CSV table: header row plus stringified records.
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Full-precision float formatting (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl CsvTable {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Write atomically: to a temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            path.file_name().map(|f| f.to_string_lossy()).unwrap_or_default()
        )),
        None => std::path::PathBuf::from(format!(
            ".{}.tmp",
            path.file_name().map(|f| f.to_string_lossy()).unwrap_or_default()
        )),
    };
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Emit a report to a file or stdout.
pub fn emit(
    envelope: &Envelope,
    csv: Option<&CsvTable>,
    format: ReportFormat,
    output: Option<&Path>,
) -> Result<()> {
    let body = match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(envelope)?;
            s.push('\n');
            s
        }
        ReportFormat::Csv => match csv {
            Some(table) => table.render(),
            None => {
                let mut s = serde_json::to_string_pretty(envelope)?;
                s.push('\n');
                s
            }
        },
    };
    match output {
        Some(path) => write_atomic(path, &body)?,
        None => print!("{body}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_full_precision() {
        let s = fmt_f64(std::f64::consts::PI);
        assert!(s.starts_with("3.1415926535897931"));
        let x: f64 = s.parse().unwrap();
        assert_eq!(x, std::f64::consts::PI);
    }

    #[test]
    fn atomic_write_round_trip() {
        let dir = std::env::temp_dir().join("hodgekit-report-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.json");
        write_atomic(&path, "hello\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "hello\n");
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
