//! Run records and their CSV and JSON renderings.

use std::io::Write;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Null,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::Num)
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunRecord {
    pub command: String,
    pub parameters: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub outputs: Vec<Vec<Cell>>,
    pub metadata: Vec<(String, Cell)>,
}

impl RunRecord {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.push((key.to_string(), value.to_string()));
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.metadata.push((key.to_string(), value.into()));
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.outputs.push(cells);
    }

    /// Name of the first non-finite number, if any.
    pub fn non_finite(&self) -> Option<String> {
        let in_rows = self.outputs.iter().enumerate().find_map(|(r, row)| {
            row.iter()
                .zip(&self.columns)
                .find(|(c, _)| matches!(c, Cell::Num(v) if !v.is_finite()))
                .map(|(_, name)| format!("column '{name}' of row {}", r + 1))
        });
        in_rows.or_else(|| {
            self.metadata
                .iter()
                .find(|(_, c)| matches!(c, Cell::Num(v) if !v.is_finite()))
                .map(|(k, _)| format!("metadata '{k}'"))
        })
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .outputs
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    m.insert(name.clone(), json_cell(cell));
                }
                Value::Object(m)
            })
            .collect();
        let params: Map<String, Value> =
            self.parameters.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let meta: Map<String, Value> = self.metadata.iter().map(|(k, v)| (k.clone(), json_cell(v))).collect();
        let v = json!({
            "command": self.command,
            "parameters": params,
            "metadata": meta,
            "outputs": rows,
        });
        serde_json::to_string_pretty(&v).expect("record serializes") + "\n"
    }

    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = Vec::new();
        writeln!(out, "# command={}", self.command).unwrap();
        for (k, v) in &self.parameters {
            writeln!(out, "# parameter {k}={v}").unwrap();
        }
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}={}", csv_cell(v, digits)).unwrap();
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns).unwrap();
        for row in &self.outputs {
            w.write_record(row.iter().map(|c| csv_cell(c, digits))).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).expect("csv is utf-8")
    }
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
        Cell::Int(v) => json!(v),
        Cell::Bool(v) => json!(v),
        Cell::Text(v) => json!(v),
        Cell::Null => Value::Null,
    }
}

/// Shortest round-trip form at 17 or more digits, otherwise scientific
/// notation with the requested significant digits.
pub fn format_num(v: f64, digits: usize) -> String {
    if digits >= 17 {
        format!("{v:?}")
    } else {
        format!("{:.*e}", digits.max(1) - 1, v)
    }
}

fn csv_cell(c: &Cell, digits: usize) -> String {
    match c {
        Cell::Num(v) => format_num(*v, digits),
        Cell::Int(v) => v.to_string(),
        Cell::Bool(v) => v.to_string(),
        Cell::Text(v) => v.clone(),
        Cell::Null => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_carry_the_same_numbers() {
        let mut r = RunRecord::new("det", &["n", "re"]);
        r.row(vec![Cell::Int(3), Cell::Num(0.1 + 0.2)]);
        r.row(vec![Cell::Int(4), Cell::Num(-1.234_567_890_123_456_7e-300)]);
        let csv = r.to_csv(17);
        let json: Value = serde_json::from_str(&r.to_json()).unwrap();
        let from_csv: Vec<f64> = csv.lines().skip(2).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
        let from_json: Vec<f64> = json["outputs"].as_array().unwrap().iter().map(|o| o["re"].as_f64().unwrap()).collect();
        assert_eq!(from_csv, from_json);
        assert_eq!(from_csv, vec![0.1 + 0.2, -1.234_567_890_123_456_7e-300]);
    }

    #[test]
    fn non_finite_is_reported() {
        let mut r = RunRecord::new("det", &["n", "re"]);
        r.row(vec![Cell::Int(1), Cell::Num(f64::NAN)]);
        assert!(r.non_finite().unwrap().contains("re"));
    }

    #[test]
    fn short_digits() {
        assert_eq!(format_num(0.219_346_1, 4), "2.193e-1");
    }
}
