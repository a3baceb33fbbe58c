use std::io::Write;

use dicke_core::Error;
use serde_json::{Map, Value};

use crate::config::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Singular,
    NonConverged,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Singular => "singular",
            Status::NonConverged => "nonconverged",
        }
    }

    pub fn of_error(e: &Error) -> Self {
        match e {
            Error::NonConvergedSeries { .. }
            | Error::CutoffOverflow { .. }
            | Error::NumericalBreakdown { .. } => Status::NonConverged,
            _ => Status::Singular,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
    /// Value not available because the row failed.
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) if v.is_finite() => format!("{v:.16e}"),
            Cell::Float(_) | Cell::Missing => String::new(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Missing => Value::Null,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Row {
    pub cells: Vec<Cell>,
    pub status: Status,
}

impl Row {
    pub fn ok(cells: Vec<Cell>) -> Self {
        // a non-finite number is never written as a value
        let status = if cells
            .iter()
            .any(|c| matches!(c, Cell::Float(v) if !v.is_finite()))
        {
            Status::Singular
        } else {
            Status::Ok
        };
        Self { cells, status }
    }

    /// Keeps the leading key cells, blanks out the rest.
    pub fn failed(mut keys: Vec<Cell>, width: usize, err: &Error) -> Self {
        keys.resize(width, Cell::Missing);
        Self {
            cells: keys,
            status: Status::of_error(err),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Self {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.status != Status::Ok).count()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<&str> = self.columns.clone();
        header.push("status");
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec: Vec<String> = row.cells.iter().map(Cell::csv).collect();
            rec.push(row.status.as_str().to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (col, cell) in self.columns.iter().zip(&row.cells) {
                    m.insert((*col).to_string(), cell.json());
                }
                m.insert("status".into(), Value::from(row.status.as_str()));
                Value::Object(m)
            })
            .collect();
        let mut m = Map::new();
        m.insert("table".into(), Value::from(self.name));
        m.insert(
            "columns".into(),
            Value::from(
                self.columns
                    .iter()
                    .chain(std::iter::once(&"status"))
                    .map(|c| Value::from(*c))
                    .collect::<Vec<_>>(),
            ),
        );
        m.insert("rows".into(), Value::Array(rows));
        Value::Object(m)
    }
}

/// Writes one or more tables. CSV tables are separated by a blank line;
/// JSON output is a single array when there is more than one table.
pub fn write_tables<W: Write>(tables: &[Table], format: Format, mut out: W) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                t.write_csv(&mut out).map_err(std::io::Error::other)?;
            }
        }
        Format::Json => {
            let value = if tables.len() == 1 {
                tables[0].to_json()
            } else {
                Value::Array(tables.iter().map(Table::to_json).collect())
            };
            serde_json::to_writer_pretty(&mut out, &value)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
