//! Record tables and their CSV / JSON renderings.

use serde::Serialize;
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub name: &'static str,
    pub unit: &'static str,
}

impl Column {
    pub fn new(name: &'static str, unit: &'static str) -> Self {
        Column { name, unit }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub case: &'static str,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    /// Header `name[unit]`, then one line per record. `{:.16e}` keeps 17
    /// significant digits, enough to read every value back exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.columns.iter().map(|c| format!("{}[{}]", c.name, c.unit)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write!(out, "{v:.16e}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tables always serialize");
        s.push('\n');
        s
    }
}
