//! Rendering of command results as CSV or JSON.

use anyhow::Context;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, Resolved};

pub const SCHEMA_VERSION: u32 = 1;

/// `x` with 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    /// `# key: value` lines written between the schema line and the header.
    pub comments: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn comment(&mut self, key: &str, value: impl ToString) {
        self.comments.push((key.to_string(), value.to_string()));
    }

    pub fn row(&mut self, fields: Vec<String>) {
        self.rows.push(fields);
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub result: Value,
    pub table: Table,
    /// False when a tolerance or invariant check failed.
    pub passed: bool,
    pub failure: Option<String>,
}

impl Report {
    pub fn new<T: Serialize>(result: &T, table: Table) -> anyhow::Result<Self> {
        Ok(Self {
            result: serde_json::to_value(result)?,
            table,
            passed: true,
            failure: None,
        })
    }

    pub fn fail(mut self, why: impl Into<String>) -> Self {
        self.passed = false;
        self.failure = Some(why.into());
        self
    }
}

pub fn render(report: &Report, cfg: &Resolved) -> anyhow::Result<Vec<u8>> {
    match cfg.format {
        Format::Json => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": cfg.command.to_string(),
                "config": cfg.to_config(),
                "passed": report.passed,
                "result": report.result,
            });
            let mut out = serde_json::to_vec_pretty(&doc)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut out = format!("# schema_version: {SCHEMA_VERSION}\n").into_bytes();
            for (k, v) in &report.table.comments {
                out.extend_from_slice(format!("# {k}: {v}\n").as_bytes());
            }
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&report.table.header)?;
            for row in &report.table.rows {
                w.write_record(row)?;
            }
            w.into_inner().context("flushing CSV")
        }
    }
}
