use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::manifest::RunManifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }

    fn csv(&self) -> String {
        match self {
            // 17 significant digits round-trip every f64
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    manifest: &'a RunManifest,
    columns: &'a [&'static str],
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn render(&self, manifest: &RunManifest, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = manifest.header();
                s.push_str(&self.columns.join(","));
                s.push('\n');
                for row in &self.rows {
                    let line: Vec<String> = row.iter().map(Cell::csv).collect();
                    let _ = writeln!(s, "{}", line.join(","));
                }
                s
            }
            Format::Json => {
                let doc = JsonTable {
                    manifest,
                    columns: &self.columns,
                    rows: self
                        .rows
                        .iter()
                        .map(|r| r.iter().map(Cell::json).collect())
                        .collect(),
                };
                let mut s = serde_json::to_string_pretty(&doc).expect("table serialises");
                s.push('\n');
                s
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Table {
        Table {
            columns: vec!["omega", "theta", "feasible"],
            rows: vec![
                vec![Cell::Float(1e15), Cell::Float(0.1), Cell::Int(1)],
                vec![Cell::Float(5.3e15), Cell::Empty, Cell::Int(0)],
            ],
        }
    }

    #[test]
    fn csv_layout() {
        let m = RunManifest::new("dispersion", vec![]);
        let out = table().render(&m, Format::Csv);
        let body: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body[0], "omega,theta,feasible");
        assert_eq!(body[1], "1.0000000000000000e15,1.0000000000000001e-1,1");
        assert_eq!(body[2], "5.3000000000000000e15,,0");
        assert!(out.starts_with("# spp "));
    }

    #[test]
    fn json_manifest_comes_first() {
        let m = RunManifest::new("dispersion", vec![]);
        let out = table().render(&m, Format::Json);
        let first_key = out.lines().nth(1).unwrap().trim();
        assert!(first_key.starts_with("\"manifest\""), "{first_key}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rows"][1][1], Value::Null);
    }
}
