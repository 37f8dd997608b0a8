use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};
use torus_ech::KnotParams;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Serialize, Debug)]
pub struct Metadata {
    pub p: i64,
    pub q: i64,
    pub cutoffs: Map<String, Value>,
    #[serde(rename = "deltaMode")]
    pub delta_mode: String,
    #[serde(rename = "toolVersion")]
    pub tool_version: &'static str,
}

impl Metadata {
    pub fn new(kp: &KnotParams, cutoffs: Value) -> Self {
        let cutoffs = match cutoffs {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        Metadata {
            p: kp.p(),
            q: kp.q(),
            cutoffs,
            delta_mode: kp.delta_mode().to_string(),
            tool_version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// A command result: a string table for table/CSV output, a structured
/// payload for JSON, and optional summary lines printed under the table.
#[derive(Debug)]
pub struct Report {
    pub metadata: Metadata,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
    pub notes: Vec<String>,
    /// False when a requested check failed; the process then exits nonzero.
    pub ok: bool,
}

impl Report {
    pub fn new(metadata: Metadata, headers: Vec<&'static str>) -> Self {
        Report {
            metadata,
            headers,
            rows: Vec::new(),
            json: Value::Null,
            notes: Vec::new(),
            ok: true,
        }
    }

    pub fn emit(&self, format: Format, path: Option<&Path>) -> io::Result<()> {
        let mut out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        match format {
            Format::Table => self.write_table(&mut out)?,
            Format::Csv => self.write_csv(&mut out)?,
            Format::Json => {
                let doc = json!({ "metadata": self.metadata, "data": self.json });
                serde_json::to_writer_pretty(&mut out, &doc)?;
                writeln!(out)?;
            }
        }
        out.flush()
    }

    fn write_table(&self, out: &mut dyn Write) -> io::Result<()> {
        if !self.headers.is_empty() {
            let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
            for row in &self.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: &mut dyn Iterator<Item = &str>| {
                cells
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(out, "{}", line(&mut self.headers.iter().copied()))?;
            for row in &self.rows {
                writeln!(out, "{}", line(&mut row.iter().map(String::as_str)))?;
            }
        }
        for note in &self.notes {
            writeln!(out, "{note}")?;
        }
        Ok(())
    }

    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if self.headers.is_empty() {
            w.write_record(["note"])?;
            for note in &self.notes {
                w.write_record([note])?;
            }
        } else {
            w.write_record(&self.headers)?;
            for row in &self.rows {
                w.write_record(row)?;
            }
        }
        w.flush()
    }
}
