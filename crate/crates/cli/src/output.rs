//! Deterministic CSV and JSON emitters.
//!
//! Floats print through [`fmt_float`] with 17 significant digits so that
//! parsing the text back recovers the exact bit pattern.  Metadata is kept in
//! a sorted map and written in key order, which makes repeated runs with the
//! same inputs byte-identical.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::args::{Format, OutputArgs};

/// 17 significant digits: enough to round-trip any f64 exactly.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        return "NaN".to_string();
    }
    format!("{:.16e}", v)
}

pub fn fmt_opt_float(v: Option<f64>) -> String {
    match v {
        Some(v) => fmt_float(v),
        None => "NaN".to_string(),
    }
}

/// Ordered key/value block stamped at the top of every report.
#[derive(Debug, Default)]
pub struct Metadata {
    entries: BTreeMap<String, String>,
}

impl Metadata {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    pub fn push_float(&mut self, key: &str, value: f64) {
        self.push(key, fmt_float(value));
    }

    fn csv_comment_block(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "# {}: {}", k, v);
        }
        out
    }
}

impl Serialize for Metadata {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

#[derive(Debug, Serialize)]
struct JsonReport<'a, R: Serialize> {
    metadata: &'a Metadata,
    rows: &'a [R],
}

/// A finished report: metadata plus pre-rendered CSV rows or serializable rows.
pub struct Report<'a, R: Serialize> {
    pub metadata: &'a Metadata,
    pub csv_header: &'a str,
    pub csv_rows: Vec<String>,
    pub rows: &'a [R],
}

impl<'a, R: Serialize> Report<'a, R> {
    pub fn render(&self, format: Format) -> Result<String, serde_json::Error> {
        match format {
            Format::Csv => {
                let mut out = self.metadata.csv_comment_block();
                out.push_str(self.csv_header);
                out.push('\n');
                for row in &self.csv_rows {
                    out.push_str(row);
                    out.push('\n');
                }
                Ok(out)
            }
            Format::Json => {
                let report = JsonReport { metadata: self.metadata, rows: self.rows };
                let mut text = serde_json::to_string_pretty(&report)?;
                text.push('\n');
                Ok(text)
            }
        }
    }
}

/// Write rendered text to the requested destination.
pub fn emit(output: &OutputArgs, text: &str) -> io::Result<()> {
    match &output.output {
        Some(path) => write_file(path, text),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()
        }
    }
}

fn write_file(path: &Path, text: &str) -> io::Result<()> {
    fs::write(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_text() {
        for &v in &[0.5, 1.0 / 3.0, -2.5e-13, 6.02e23, f64::MIN_POSITIVE, -0.0] {
            let text = fmt_float(v);
            let back: f64 = text.parse().unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "{} reparsed as {}", text, back);
        }
    }

    #[test]
    fn nan_prints_bare() {
        assert_eq!(fmt_float(f64::NAN), "NaN");
        assert_eq!(fmt_opt_float(None), "NaN");
    }

    #[test]
    fn metadata_renders_sorted() {
        let mut meta = Metadata::new();
        meta.push("zeta", "1");
        meta.push("alpha", "2");
        assert_eq!(meta.csv_comment_block(), "# alpha: 2\n# zeta: 1\n");
    }
}
