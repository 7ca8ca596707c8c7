//! CSV and JSON emission. CSV has a fixed column order, a header row even
//! when empty, LF line endings and floats in shortest round-trip form. JSON
//! mirrors the rows as flat objects next to a metadata object.

use std::io::Write;

use serde_json::{json, Map, Value as Json};

use super::config::Format;
use super::CliError;
use crate::sweep_engine::Value;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Flag(bool),
    Text(String),
    Empty,
}

impl From<Value> for Cell {
    fn from(v: Value) -> Self {
        match v {
            Value::Num(x) => Cell::Num(x),
            Value::Flag(b) => Cell::Flag(b),
            Value::Text(s) => Cell::Text(s.to_string()),
        }
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // `Debug` for f64 is the shortest string that round-trips, with
            // exponent notation outside [1e-5, 1e16).
            Cell::Num(x) => format!("{x:?}"),
            Cell::Int(n) => n.to_string(),
            Cell::Flag(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(n) => json!(n),
            Cell::Flag(b) => json!(b),
            Cell::Text(s) => json!(s),
            Cell::Empty => Json::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Json,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>, metadata: Json) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            metadata,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Result<Vec<u8>, CliError> {
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Json> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::to_json))
                    .collect();
                Json::Object(obj)
            })
            .collect();
        let doc = json!({ "metadata": self.metadata, "rows": rows });
        let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn emit(&self, format: Format, path: Option<&str>) -> Result<(), CliError> {
        let bytes = match format {
            Format::Csv => self.to_csv()?,
            Format::Json => self.to_json()?,
        };
        match path {
            Some(p) => {
                std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("cannot write {p}: {e}")))
            }
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(&bytes)
                    .and_then(|()| out.flush())
                    .map_err(|e| CliError::Io(e.to_string()))
            }
        }
    }
}
