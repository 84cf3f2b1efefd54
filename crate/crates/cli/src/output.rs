//! CSV and JSON emitters.
//!
//! CSV: one `# format=1 key=value ...` comment line, a header row, then
//! comma-separated rows, all LF-terminated. JSON: a single UTF-8 object with
//! `"format": 1`. Big integers are decimal strings in JSON.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{Map, Value};

use crate::FORMAT_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A flat table plus key/value metadata, renderable as CSV or JSON.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub meta: Vec<(String, Value)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Table::default()
        }
    }

    pub fn meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.meta.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(csv_cell))
                .expect("in-memory write");
        }
        let body =
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells");
        csv_comment(&self.meta) + &body
    }

    /// Rows become objects keyed by column name.
    pub fn to_json(&self) -> String {
        let mut obj = json_header(&self.meta);
        let rows = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .cloned()
                        .zip(row.iter().cloned())
                        .collect(),
                )
            })
            .collect();
        obj.insert("rows".into(), Value::Array(rows));
        json_string(obj)
    }
}

pub fn csv_comment(meta: &[(String, Value)]) -> String {
    let mut s = format!("# format={FORMAT_VERSION}");
    for (k, v) in meta {
        write!(s, " {k}={}", csv_cell(v).replace(' ', "_")).expect("write to string");
    }
    s.push('\n');
    s
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn json_header(meta: &[(String, Value)]) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("format".into(), FORMAT_VERSION.into());
    for (k, v) in meta {
        obj.insert(k.clone(), v.clone());
    }
    obj
}

pub fn json_string(obj: Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json values serialize");
    s.push('\n');
    s
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(text: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
