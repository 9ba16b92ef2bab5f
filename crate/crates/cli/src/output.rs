//! Report assembly: versioned JSON documents and plot-ready CSV tables.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::{Format, OutputArgs};

/// Wraps a payload in the versioned envelope `{schema: 1, command, ...}`.
pub fn envelope(command: &str, payload: Value) -> Value {
    json!({
        "schema": 1,
        "command": command,
        "report": payload,
    })
}

pub fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report serialization cannot fail")
}

/// A CSV table with a fixed header; numbers render via Rust's shortest
/// round-trip formatting so reruns are byte-identical.
pub struct CsvTable {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "csv row arity");
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Renders the report in the requested format and writes it to the target
/// (stdout by default).
pub fn emit(
    output: &OutputArgs,
    default_format: Format,
    json_report: &Value,
    csv_report: Option<&CsvTable>,
) -> std::io::Result<()> {
    let format = output.format.unwrap_or(default_format);
    let text = match (format, csv_report) {
        (Format::Csv, Some(table)) => table.render(),
        (Format::Csv, None) => {
            // No tabular form exists; fall back to JSON rather than drop data.
            let mut s = serde_json::to_string_pretty(json_report).unwrap();
            s.push('\n');
            s
        }
        (Format::Json, _) => {
            let mut s = serde_json::to_string_pretty(json_report).unwrap();
            s.push('\n');
            s
        }
    };
    match &output.out {
        Some(path) => write_file(path, &text),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
        }
    }
}

fn write_file(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, text)
}

/// Least-squares slope of `ln(y)` against `ln(x)`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let numerator: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let denominator: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    numerator / denominator
}
