//! CSV tables and JSON run reports.

use crate::config::RunConfig;
use crate::CliError;
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};

/// Scientific notation with 17 significant digits; non-finite values as `nan`, `inf`, `-inf`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// Fixed-point rendering with 10 significant digits.
pub fn fmt_sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    let decimals = (9 - e).max(0) as usize;
    format!("{x:.decimals$}")
}

/// One CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Int(b as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Comma-separated table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::render).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

/// Grid description embedded in every report.
pub fn grid_spec(p_min: f64, p_max: f64, n: usize) -> Value {
    json!({ "p_min": p_min, "p_max": p_max, "n": n, "spacing": "logarithmic" })
}

/// The JSON document of one run.
pub fn report_json(command: &str, cfg: &RunConfig, grid: Value, results: Value) -> Value {
    json!({
        "command": command,
        "config": cfg.to_json(),
        "config_hash": cfg.hash(),
        "seed": cfg.seed,
        "grid": grid,
        "results": results,
        "versions": { "tms-cli": env!("CARGO_PKG_VERSION"), "tms-core": tms_core::VERSION },
    })
}

/// Writes `<stem>.csv` for each table and `<command>.json` into `dir`; returns the paths.
pub fn write_reports(dir: &Path, command: &str, tables: &[(String, Table)], json: &Value) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (stem, table) in tables {
        let p = dir.join(format!("{stem}.csv"));
        fs::write(&p, table.to_csv())?;
        paths.push(p);
    }
    let p = dir.join(format!("{command}.json"));
    let mut text = serde_json::to_string_pretty(json)?;
    text.push('\n');
    fs::write(&p, text)?;
    paths.push(p);
    Ok(paths)
}
