//! Report envelope and writers. Every report starts with the same header:
//! tool version, schema version, subcommand and config hash.

use std::io::Write;
use std::path::{Path, PathBuf};

use casimir_core::numeric::Estimate;
use serde::Serialize;

use crate::config::Format;

pub const SCHEMA: &str = "casimir-report/1";

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Header {
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config_hash: String,
}

impl Header {
    pub fn new(command: &str, config_hash: String) -> Self {
        Self { schema: SCHEMA, tool: "casimir", version: env!("CARGO_PKG_VERSION"), command: command.into(), config_hash }
    }

    fn csv_comment(&self) -> String {
        format!("# {} {} schema={} command={} config-sha256={}", self.tool, self.version, self.schema, self.command, self.config_hash)
    }
}

/// A value with its error bound, as it appears in machine-readable output.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bounded {
    pub value: f64,
    pub bound: f64,
}

impl From<Estimate> for Bounded {
    fn from(e: Estimate) -> Self {
        Self { value: e.value, bound: e.bound }
    }
}

impl Bounded {
    pub fn new(value: f64, bound: f64) -> Self {
        Self { value, bound }
    }
}

/// Rows for CSV output, all cells preformatted.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub struct Output {
    pub header: Header,
    pub body: serde_json::Value,
    pub table: Table,
}

#[derive(Serialize)]
struct Envelope<'a> {
    header: &'a Header,
    body: &'a serde_json::Value,
}

impl Output {
    pub fn new(header: Header, body: impl Serialize, table: Table) -> Self {
        let mut body = serde_json::to_value(body).expect("report serializes");
        positive_zero(&mut body);
        Self { header, body, table }
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&Envelope { header: &self.header, body: &self.body }).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn csv(&self) -> std::io::Result<String> {
        let mut buf = Vec::new();
        writeln!(buf, "{}", self.header.csv_comment())?;
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&self.table.columns)?;
            for row in &self.table.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    /// JSON or CSV to the path or stdout. A CSV written to a file also gets
    /// the JSON report next to it.
    pub fn write(&self, format: Format, path: Option<&Path>) -> std::io::Result<Vec<PathBuf>> {
        let text = match format {
            Format::Json => self.json(),
            Format::Csv => self.csv()?,
        };
        match path {
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
                Ok(Vec::new())
            }
            Some(p) => {
                std::fs::write(p, text)?;
                let mut written = vec![p.to_path_buf()];
                if format == Format::Csv {
                    let side = p.with_extension("json");
                    std::fs::write(&side, self.json())?;
                    written.push(side);
                }
                Ok(written)
            }
        }
    }
}

fn positive_zero(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) if n.as_f64() == Some(0.0) && n.is_f64() => *v = serde_json::json!(0.0),
        serde_json::Value::Array(a) => a.iter_mut().for_each(positive_zero),
        serde_json::Value::Object(m) => m.values_mut().for_each(positive_zero),
        _ => {}
    }
}

/// Shortest round-trip formatting, so output bytes depend only on the values.
pub fn num(x: f64) -> String {
    // −0 prints as 0
    format!("{:?}", x + 0.0)
}
