use std::fmt::Write as _;

use rug::Float;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::config::RunConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `d.ddd...e±x` with `digits` significant digits.
pub fn sci(x: &Float, digits: u32) -> String {
    if x.is_zero() {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let (neg, mantissa, exp) = x.to_sign_string_exp(10, Some(digits.max(1) as usize));
    let exp = exp.unwrap_or(0) - 1;
    let (head, tail) = mantissa.split_at(1);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(head);
    if !tail.is_empty() {
        s.push('.');
        s.push_str(tail);
    }
    let _ = write!(s, "e{exp}");
    s
}

#[derive(Clone, Debug)]
pub enum Cell {
    Num(Float),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self, digits: u32) -> String {
        match self {
            Cell::Num(x) => sci(x, digits),
            Cell::Int(i) => i.to_string(),
            Cell::Text(t) => t.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

/// Column-ordered rows plus optional key/value summary lines.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(&'static str, Cell)>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), ..Self::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, config: &RunConfig) -> String {
        match config.format {
            crate::config::Format::Json => self.json(config),
            crate::config::Format::Csv => self.csv(config),
        }
    }

    fn json(&self, config: &RunConfig) -> String {
        let doc = JsonDoc { table: self, config, digits: config.digits };
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }

    fn csv(&self, config: &RunConfig) -> String {
        let mut s = format!("# version={VERSION}\n# config={}\n", config.canonical());
        for (k, v) in &self.summary {
            let _ = writeln!(s, "# {k}={}", v.render(config.digits));
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_escape(&c.render(config.digits))).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

struct JsonDoc<'a> {
    table: &'a Table,
    config: &'a RunConfig,
    digits: u32,
}

struct JsonRow<'a> {
    columns: &'a [&'static str],
    cells: &'a [Cell],
    digits: u32,
}

impl Serialize for JsonRow<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.cells.len()))?;
        for (k, c) in self.columns.iter().zip(self.cells) {
            match c {
                Cell::Bool(b) => m.serialize_entry(k, b)?,
                other => m.serialize_entry(k, &other.render(self.digits))?,
            }
        }
        m.end()
    }
}

impl Serialize for JsonDoc<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("version", VERSION)?;
        m.serialize_entry("config", self.config)?;
        if !self.table.summary.is_empty() {
            let keys: Vec<&'static str> = self.table.summary.iter().map(|(k, _)| *k).collect();
            let cells: Vec<Cell> = self.table.summary.iter().map(|(_, v)| v.clone()).collect();
            m.serialize_entry("summary", &JsonRow { columns: &keys, cells: &cells, digits: self.digits })?;
        }
        let rows: Vec<JsonRow<'_>> = self
            .table
            .rows
            .iter()
            .map(|r| JsonRow { columns: &self.table.columns, cells: r, digits: self.digits })
            .collect();
        m.serialize_entry("rows", &rows)?;
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific() {
        assert_eq!(sci(&Float::with_val(64, 1234.5), 3), "1.23e3");
        assert_eq!(sci(&Float::with_val(64, -0.0156), 4), "-1.560e-2");
        assert_eq!(sci(&Float::with_val(64, 0), 4), "0");
        assert_eq!(sci(&Float::with_val(64, 1), 1), "1e0");
    }
}
