// SPDX-License-Identifier: MIT OR Apache-2.0

//! Result tables and their CSV/JSON persistence.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use super::format::{format_sig, SigFormatter};
use crate::error::Result;

const CSV_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_sig(*v, CSV_DIGITS),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

/// A named table with a fixed column set.
#[derive(Clone, Debug)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table { name, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width of table `{}`", self.name);
        self.rows.push(row);
    }

    fn records(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Provenance written into every output file.
#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub config: Value,
}

impl Metadata {
    pub fn new(command: &'static str, seed: u64, config: Value) -> Self {
        Metadata { tool: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION"), command, seed, config }
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFormatter::new());
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("JSON output is UTF-8"))
}

fn write_csv(path: &Path, meta: &Metadata, table: &Table) -> Result<()> {
    let mut file = fs::File::create(path)?;
    writeln!(file, "# tool: {} {}", meta.tool, meta.version)?;
    writeln!(file, "# command: {}", meta.command)?;
    writeln!(file, "# seed: {}", meta.seed)?;
    writeln!(file, "# config: {}", serde_json::to_string(&meta.config)?)?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::csv))?;
    }
    w.flush()?;
    Ok(())
}

fn write_json(path: &Path, meta: &Metadata, tables: &[Table]) -> Result<()> {
    let mut doc = match serde_json::to_value(meta)? {
        Value::Object(m) => m,
        _ => unreachable!("metadata serializes to an object"),
    };
    let records: Map<String, Value> = tables.iter().map(|t| (t.name.to_string(), t.records())).collect();
    doc.insert("tables".into(), Value::Object(records));
    fs::write(path, to_json_string(&Value::Object(doc))?)?;
    Ok(())
}

/// Writes `<table>.csv` per table, or a single `<command>.json`. Returns the paths written.
pub fn write_tables(dir: &Path, format: Format, meta: &Metadata, tables: &[Table]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    match format {
        Format::Csv => tables
            .iter()
            .map(|t| {
                let path = dir.join(format!("{}.csv", t.name));
                write_csv(&path, meta, t).map(|_| path)
            })
            .collect(),
        Format::Json => {
            let path = dir.join(format!("{}.json", meta.command));
            write_json(&path, meta, tables)?;
            Ok(vec![path])
        }
    }
}
