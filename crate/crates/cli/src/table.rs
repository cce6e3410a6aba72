//! Tabular reports rendered as CSV or JSON.

use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use apsets::num::fmt_sig17;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::Format;

pub enum Cell {
    Int(u64),
    Real(f64),
    Text(String),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => fmt_sig17(*v),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Real(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Missing => Value::Null,
        }
    }
}

pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra top-level JSON fields (summaries); not part of the CSV.
    pub summary: Option<Value>,
}

impl Table {
    pub fn new(headers: Vec<&'static str>) -> Self {
        Table {
            headers,
            rows: Vec::new(),
            summary: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

pub struct Sink {
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl Sink {
    pub fn new(path: Option<PathBuf>, format: Format) -> Self {
        Sink { path, format }
    }

    pub fn emit(&self, config: &impl Serialize, table: &Table) -> anyhow::Result<()> {
        let bytes = match self.format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&table.headers)?;
                for row in &table.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                w.into_inner().context("flushing csv")?
            }
            Format::Json => {
                let rows: Vec<Value> = table
                    .rows
                    .iter()
                    .map(|row| {
                        let mut m = Map::new();
                        for (h, c) in table.headers.iter().zip(row) {
                            m.insert((*h).to_string(), c.json());
                        }
                        Value::Object(m)
                    })
                    .collect();
                let mut doc = json!({ "config": config, "rows": rows });
                if let Some(s) = &table.summary {
                    doc["summary"] = s.clone();
                }
                let mut v = serde_json::to_vec_pretty(&doc)?;
                v.push(b'\n');
                v
            }
        };
        self.write(&bytes)
    }

    pub fn write(&self, bytes: &[u8]) -> anyhow::Result<()> {
        match &self.path {
            Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
                Ok(())
            }
        }
    }
}
