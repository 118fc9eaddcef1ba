//! CSV and JSON emission with a metadata header.
//!
//! CSV files start with `#` comment lines carrying the library version, the
//! full run configuration as JSON and (unless deterministic output was
//! requested) a timestamp, followed by a header row and data rows. JSON
//! output is one document with the same metadata and the rows as arrays.

use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::{Format, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A rectangular numeric table; rows may be ragged only for sample dumps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    version: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    config: &'a RunConfig,
    columns: &'a [String],
    rows: &'a [Vec<f64>],
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Writes `table` in the configured format.
pub fn write_table<W: Write>(out: W, table: &Table, config: &RunConfig, deterministic: bool) -> Result<()> {
    match config.format {
        Format::Csv => write_csv(out, table, config, deterministic),
        Format::Json => write_json(out, table, config, deterministic),
    }
}

fn write_csv<W: Write>(mut out: W, table: &Table, config: &RunConfig, deterministic: bool) -> Result<()> {
    writeln!(out, "# alphadpp {VERSION}")?;
    writeln!(out, "# config: {}", serde_json::to_string(config)?)?;
    if !deterministic {
        writeln!(out, "# timestamp: {}", timestamp())?;
    }
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<W: Write>(mut out: W, table: &Table, config: &RunConfig, deterministic: bool) -> Result<()> {
    let doc = JsonDocument {
        version: VERSION,
        timestamp: (!deterministic).then(timestamp),
        config,
        columns: &table.columns,
        rows: &table.rows,
    };
    serde_json::to_writer(&mut out, &doc)?;
    writeln!(out)?;
    Ok(())
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn emit(table: &Table, config: &RunConfig, deterministic: bool) -> Result<()> {
    match &config.output {
        Some(path) => {
            let file = std::fs::File::create(path).with_context(|| format!("cannot create {path}"))?;
            write_table(std::io::BufWriter::new(file), table, config, deterministic)
        }
        None => write_table(std::io::stdout().lock(), table, config, deterministic),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Table {
        let mut t = Table::new(["x", "y"]);
        t.push(vec![0.0, 1.5]);
        t.push(vec![1.0, -2.0]);
        t
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        let config = RunConfig::new("density", Format::Csv);
        write_table(&mut buf, &table(), &config, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("# alphadpp {VERSION}"));
        assert!(lines[1].starts_with("# config: {\"command\":\"density\""));
        assert_eq!(&lines[2..], &["x,y", "0,1.5", "1,-2"]);
    }

    #[test]
    fn timestamp_only_when_not_deterministic() {
        let config = RunConfig::new("density", Format::Csv);
        let mut buf = Vec::new();
        write_table(&mut buf, &table(), &config, false).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains("# timestamp: "));
    }

    #[test]
    fn json_document() {
        let config = RunConfig::new("sk", Format::Json);
        let mut buf = Vec::new();
        write_table(&mut buf, &table(), &config, true).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["columns"][1], "y");
        assert_eq!(v["rows"][1][1], -2.0);
        assert!(v.get("timestamp").is_none());
    }
}
