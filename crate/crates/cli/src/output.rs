use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;

use crate::commands::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Flat view of a report for CSV output.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

pub fn render<T: Serialize>(report: &T, table: impl FnOnce() -> Table, format: Format) -> Result<Vec<u8>, Failure> {
    match format {
        Format::Json => {
            let mut bytes = serde_json::to_vec_pretty(report).map_err(|e| Failure::Io(e.to_string()))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => {
            let t = table();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&t.header).map_err(|e| Failure::Io(e.to_string()))?;
            for row in &t.rows {
                w.write_record(row).map_err(|e| Failure::Io(e.to_string()))?;
            }
            w.into_inner().map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

pub fn write(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(bytes).map_err(|e| Failure::Io(e.to_string())),
    }
}

/// Prints a structured error to stderr and picks the exit status: 2 for a
/// failed hard assertion, 1 for everything else.
pub fn fail(f: &Failure) -> ExitCode {
    let (kind, message, code) = match f {
        Failure::Usage(m) => ("usage", m.clone(), 1),
        Failure::Io(m) => ("io", m.clone(), 1),
        Failure::Core(e) if e.is_assertion() => ("assertion", e.to_string(), 2),
        Failure::Core(e) => ("precondition", e.to_string(), 1),
        Failure::Assertion(m) => ("assertion", m.clone(), 2),
    };
    let body = json!({
        "schema_version": richgrid::report::SCHEMA_VERSION,
        "error": { "kind": kind, "message": message },
    });
    eprintln!("{body}");
    ExitCode::from(code)
}
