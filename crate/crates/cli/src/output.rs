//! Tabular results and their CSV / JSON renderings.

use std::io::Write;

use serde_json::{json, Map};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Flag(bool),
    Text(String),
    /// Observable undefined at this point (e.g. unstable operating point).
    Empty,
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Num(x) => Some(*x),
            _ => None,
        }
    }

    fn to_csv(&self) -> String {
        match self {
            Value::Num(x) => format_sig(*x),
            Value::Flag(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Empty => String::new(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Num(x) => json!(x),
            Value::Flag(b) => json!(b),
            Value::Text(s) => json!(s),
            Value::Empty => serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Value>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }

    /// Keeps only the named columns, in the given order.
    pub fn select(&self, names: &[&str]) -> Table {
        let idx: Vec<usize> = names.iter().map(|n| self.column_index(n).expect("known column")).collect();
        Table {
            columns: names.iter().map(|s| s.to_string()).collect(),
            rows: self.rows.iter().map(|r| idx.iter().map(|&k| r[k].clone()).collect()).collect(),
        }
    }

    /// Inserts a column computed from each row.
    pub fn insert_column(&mut self, at: usize, name: &str, f: impl Fn(&[Value]) -> Value) {
        self.columns.insert(at, name.to_string());
        for r in &mut self.rows {
            let v = f(r);
            r.insert(at, v);
        }
    }

    /// Stacks tables with identical columns.
    pub fn concat(tables: Vec<Table>) -> Table {
        let mut it = tables.into_iter();
        let mut out = it.next().unwrap_or_default();
        for t in it {
            assert_eq!(t.columns, out.columns);
            out.rows.extend(t.rows);
        }
        out
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(&self.columns)?;
        for r in &self.rows {
            wr.write_record(r.iter().map(Value::to_csv))?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }

    /// `{ "parameters": …, "columns": { name: [values…] } }`.
    pub fn to_json(&self, parameters: serde_json::Value) -> serde_json::Value {
        let mut cols = Map::new();
        for (k, name) in self.columns.iter().enumerate() {
            cols.insert(name.clone(), self.rows.iter().map(|r| r[k].to_json()).collect());
        }
        json!({ "parameters": parameters, "columns": cols })
    }
}

/// Twelve significant digits, `%g` style. Non-finite values never reach the
/// output: they are rendered empty.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if !x.is_finite() {
        return String::new();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let fixed = format!("{:.*}", (DIGITS - 1 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
