//! CSV tables with a header row and fixed nine-significant-digit numbers.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// `x` with nine significant digits in scientific notation.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.8e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// One CSV cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell<'a> {
    Int(i64),
    Num(f64),
    Text(&'a str),
}

impl From<f64> for Cell<'_> {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell<'_> {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl<'a> From<&'a str> for Cell<'a> {
    fn from(s: &'a str) -> Self {
        Cell::Text(s)
    }
}

impl Cell<'_> {
    fn render(self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Num(x) => format_number(x),
            Cell::Text(s) => s.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: &[Cell<'_>]) {
        assert_eq!(
            row.len(),
            self.header.len(),
            "row width differs from header"
        );
        self.rows.push(row.iter().map(|c| c.render()).collect());
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        let cells: Vec<Cell> = row.iter().map(|&x| Cell::Num(x)).collect();
        self.push(&cells);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    /// Writes the table, creating parent directories.
    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        self.write_to(fs::File::create(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_digits() {
        assert_eq!(format_number(1.0), "1.00000000e0");
        assert_eq!(format_number(-0.000123456789123), "-1.23456789e-4");
        assert_eq!(format_number(f64::INFINITY), "inf");
    }

    #[test]
    fn header_and_rows() {
        let mut t = CsvTable::new(&["n", "x", "label"]);
        t.push(&[1usize.into(), 2.5.into(), "te".into()]);
        assert_eq!(t.to_string().unwrap(), "n,x,label\n1,2.50000000e0,te\n");
    }

    #[test]
    fn round_trips_to_nine_digits() {
        let x = std::f64::consts::PI * 1e7;
        let back: f64 = format_number(x).parse().unwrap();
        assert!(((back - x) / x).abs() < 5e-9);
    }
}
