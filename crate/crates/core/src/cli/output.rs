//! Tabular export. Numbers carry 12 significant digits; lines end in LF.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use super::config::{OutputFormat, RunConfig};
use crate::error::Result;

/// One table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => match format_number(*x).parse::<f64>() {
                Ok(v) if v.is_finite() => json!(v),
                _ => Value::Null,
            },
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
        }
    }
}

/// Fixed 12-significant-digit scientific notation.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.11e}")
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Free-form `key: value` notes written as plain comments.
    pub notes: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new(), notes: Vec::new() }
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        match cfg.format {
            OutputFormat::Csv => self.render_csv(cfg),
            OutputFormat::Json => self.render_json(cfg),
        }
    }

    fn render_csv(&self, cfg: &RunConfig) -> String {
        let mut s = cfg.header_text();
        for (k, v) in &self.notes {
            let _ = writeln!(s, "# {k}: {v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    fn render_json(&self, cfg: &RunConfig) -> String {
        let config: Map<String, Value> = cfg.header_lines().into_iter().map(|(k, v)| (k, Value::String(v))).collect();
        let notes: Map<String, Value> = self.notes.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({
            "config": config,
            "notes": notes,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json values are always serializable");
        s.push('\n');
        s
    }

    /// Writes `<dir>/<stem>.<ext>` and returns the path.
    pub fn write(&self, cfg: &RunConfig, dir: &Path, stem: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{stem}.{}", cfg.format.extension()));
        std::fs::write(&path, self.render(cfg))?;
        Ok(path)
    }
}
