use serde::Serialize;

use crate::args::Format;
use crate::error::CliError;

pub enum Cell {
    F(f64),
    I(i64),
    S(String),
    B(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}
impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::I(x as i64)
    }
}
impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::B(x)
    }
}
impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::S(x.to_owned())
    }
}

/// Floats with 17 significant digits.
fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(x) => float(*x),
            Cell::I(i) => i.to_string(),
            Cell::S(s) => s.clone(),
            Cell::B(b) => b.to_string(),
        }
    }
}

pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

/// A command result, ready to be written in either format.
pub struct Payload {
    json: String,
    table: Table,
}

impl Payload {
    pub fn new<T: Serialize>(value: &T, table: Table) -> Result<Self, CliError> {
        let json = serde_json::to_string(value).map_err(|e| CliError::Io(e.to_string()))?;
        Ok(Self { json, table })
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(format!("{}\n", self.json)),
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
                let io = |e: csv::Error| CliError::Io(e.to_string());
                w.write_record(self.table.header).map_err(io)?;
                for row in &self.table.rows {
                    w.write_record(row.iter().map(Cell::render)).map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(float(0.1), "1.0000000000000001e-1");
        assert_eq!(float(-2.0), "-2.0000000000000000e0");
    }

    #[test]
    fn csv_quotes_when_needed() {
        let t = Table {
            header: &["label", "x"],
            rows: vec![vec!["a, b".into(), 1.0.into()]],
        };
        let p = Payload::new(&(), t).unwrap();
        assert_eq!(p.render(Format::Csv).unwrap(), "label,x\r\n\"a, b\",1.0000000000000000e0\r\n");
    }
}
