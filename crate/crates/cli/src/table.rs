//! Homogeneous result tables and their CSV / JSON / text serializations.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), exact rationals as
//! `num/den` strings; row order is the order of the grid, so identical configurations
//! give identical bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::value::RawValue;

use loewner::exact::{rational_string, Rational};

use crate::config::{Format, RunConfig};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn rational(x: &Rational) -> Cell {
        Cell::Text(rational_string(x))
    }

    pub fn opt(x: Option<f64>) -> Cell {
        x.map_or(Cell::Empty, Cell::Float)
    }

    fn plain(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Box<RawValue> {
        let raw = match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_finite() => float(*v),
            Cell::Float(_) | Cell::Empty => "null".into(),
            Cell::Text(s) => serde_json::to_string(s).expect("strings serialize"),
            Cell::Bool(b) => b.to_string(),
        };
        RawValue::from_string(raw).expect("cells are valid JSON")
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Cell {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Cell {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Cell {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Cell {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Cell {
        Cell::Bool(v)
    }
}

pub fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Scalar summaries (fits, estimates) attached to the table.
    pub meta: Vec<(String, Cell)>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Table {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width of table {}", self.name);
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.meta.push((key.to_string(), value.into()));
    }
}

#[derive(Serialize)]
struct JsonTable<'a> {
    table: &'a str,
    hash: String,
    config: &'a RunConfig,
    columns: &'a [String],
    rows: Vec<Vec<Box<RawValue>>>,
    meta: serde_json::Map<String, serde_json::Value>,
}

fn csv_bytes(table: &Table) -> std::io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::plain))?;
    }
    w.into_inner().map_err(|e| e.into_error())
}

fn echo(cfg: &RunConfig, table: &Table) -> String {
    let mut s = String::new();
    writeln!(s, "hash = {}", cfg.hash()).unwrap();
    for line in cfg.to_text().lines() {
        writeln!(s, "config.{line}").unwrap();
    }
    for (k, v) in &table.meta {
        writeln!(s, "meta.{k} = {}", v.plain()).unwrap();
    }
    s
}

fn text(table: &Table, cfg: &RunConfig) -> String {
    let mut out = String::new();
    for line in echo(cfg, table).lines() {
        writeln!(out, "# {line}").unwrap();
    }
    let cells: Vec<Vec<String>> = table.rows.iter().map(|r| r.iter().map(Cell::plain).collect()).collect();
    let widths: Vec<usize> = (0..table.columns.len())
        .map(|j| cells.iter().map(|r| r[j].len()).chain([table.columns[j].len()]).max().unwrap_or(0))
        .collect();
    let line = |items: &[String]| {
        items.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
    };
    writeln!(out, "{}", line(&table.columns)).unwrap();
    for r in &cells {
        writeln!(out, "{}", line(r)).unwrap();
    }
    out
}

fn json(table: &Table, cfg: &RunConfig) -> String {
    let meta = table
        .meta
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::from_str(v.json().get()).expect("cells are valid JSON")))
        .collect();
    let doc = JsonTable {
        table: &table.name,
        hash: cfg.hash(),
        config: cfg,
        columns: &table.columns,
        rows: table.rows.iter().map(|r| r.iter().map(Cell::json).collect()).collect(),
        meta,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("tables serialize");
    s.push('\n');
    s
}

#[derive(Debug)]
pub struct EmitError {
    pub path: PathBuf,
    pub source: std::io::Error,
}

impl std::fmt::Display for EmitError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cannot write {}: {}", self.path.display(), self.source)
    }
}

/// Writes `table` to `path`. CSV stays header plus rows; the resolved configuration,
/// its hash and the table summaries go to a `<path>.cfg` sidecar. JSON and text embed
/// them directly.
pub fn emit_table(table: &Table, format: Format, path: &Path, cfg: &RunConfig) -> Result<Vec<PathBuf>, EmitError> {
    fn wrap(p: &Path) -> impl FnOnce(std::io::Error) -> EmitError + '_ {
        move |source| EmitError { path: p.to_path_buf(), source }
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(wrap(dir))?;
    }
    let mut written = vec![path.to_path_buf()];
    match format {
        Format::Csv => {
            std::fs::write(path, csv_bytes(table).map_err(wrap(path))?).map_err(wrap(path))?;
            let mut sidecar = path.as_os_str().to_owned();
            sidecar.push(".cfg");
            let sidecar = PathBuf::from(sidecar);
            let body: String = echo(cfg, table).lines().map(|l| format!("# {l}\n")).collect::<String>() + &cfg.to_text();
            std::fs::write(&sidecar, body).map_err(wrap(&sidecar))?;
            written.push(sidecar);
        }
        Format::Json => std::fs::write(path, json(table, cfg)).map_err(wrap(path))?,
        Format::Text => std::fs::write(path, text(table, cfg)).map_err(wrap(path))?,
    }
    Ok(written)
}
