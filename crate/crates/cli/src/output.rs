use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Bool(bool),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format_g17(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            // Non-finite values have no JSON number form.
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

/// C's `%.17g`: 17 significant digits, trailing zeros removed.
pub fn format_g17(x: f64) -> String {
    const P: i32 = 17;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..P).contains(&exp) {
        let fixed = format!("{:.*}", (P - 1 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            name,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }

    fn write_csv<W: Write>(&self, out: W) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Scalar fields plus any number of tables for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub fields: Vec<(&'static str, Cell)>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            fields: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn field(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.fields.push((key, value.into()));
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("command".into(), Value::from(self.command));
        for (k, v) in &self.fields {
            obj.insert(k.to_string(), v.json());
        }
        for t in &self.tables {
            obj.insert(t.name.to_string(), t.json());
        }
        Value::Object(obj)
    }

    /// Tables as written in CSV mode; a report without tables becomes `field,value`.
    fn csv_tables(&self) -> Vec<Table> {
        if !self.tables.is_empty() {
            return self.tables.clone();
        }
        let mut t = Table::new(self.command, vec!["field", "value"]);
        for (k, v) in &self.fields {
            t.push(vec![Cell::from(*k), v.clone()]);
        }
        vec![t]
    }

    pub fn emit(&self, format: Format, path: Option<&Path>) -> CliResult<Vec<PathBuf>> {
        match format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(&self.to_json())?;
                text.push('\n');
                match path {
                    Some(p) => {
                        fs::write(p, text)?;
                        Ok(vec![p.to_path_buf()])
                    }
                    None => {
                        io::stdout().lock().write_all(text.as_bytes())?;
                        Ok(Vec::new())
                    }
                }
            }
            Format::Csv => self.emit_csv(path),
        }
    }

    fn emit_csv(&self, path: Option<&Path>) -> CliResult<Vec<PathBuf>> {
        let tables = self.csv_tables();
        match path {
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                for (i, t) in tables.iter().enumerate() {
                    if i > 0 {
                        writeln!(lock)?;
                    }
                    t.write_csv(&mut lock)?;
                }
                Ok(Vec::new())
            }
            Some(p) if tables.len() == 1 => {
                tables[0].write_csv(fs::File::create(p)?)?;
                Ok(vec![p.to_path_buf()])
            }
            // Several tables: one file per table next to the requested path.
            Some(p) => {
                let mut written = Vec::new();
                for t in &tables {
                    let target = sibling(p, t.name);
                    t.write_csv(fs::File::create(&target)?)?;
                    written.push(target);
                }
                Ok(written)
            }
        }
    }
}

/// `dir/run.csv` + `grid` -> `dir/run.grid.csv`.
fn sibling(path: &Path, table: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}.{table}.{ext}"))
}
