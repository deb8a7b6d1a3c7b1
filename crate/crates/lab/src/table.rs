//! Tables with a fixed header, written as CSV or Markdown.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::config::Format;
use crate::error::{config_error, LabResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(usize),
    Real(f64),
    Text(String),
    Missing,
}

impl Cell {
    pub fn real(value: Option<f64>) -> Cell {
        value.map_or(Cell::Missing, Cell::Real)
    }

    /// Reals carry 12 significant digits.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format!("{v:.11e}"),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| *h == name)
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> LabResult<()> {
        if self.rows.is_empty() {
            return Err(config_error("refusing to emit a table without rows"));
        }
        match format {
            Format::Csv => self.write_csv(out),
            Format::Markdown => self.write_markdown(out),
        }
    }

    fn write_csv<W: Write>(&self, out: W) -> LabResult<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_markdown<W: Write>(&self, mut out: W) -> LabResult<()> {
        writeln!(out, "| {} |", self.header.join(" | "))?;
        writeln!(out, "|{}", "---|".repeat(self.header.len()))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(out, "| {} |", cells.join(" | "))?;
        }
        Ok(())
    }

    /// Writes to `path`, or to stdout when `path` is `None`.
    pub fn emit(&self, format: Format, path: Option<&Path>) -> LabResult<()> {
        match path {
            Some(path) => {
                let mut w = io::BufWriter::new(File::create(path)?);
                self.write(format, &mut w)?;
                w.flush()?;
                Ok(())
            }
            None => self.write(format, io::stdout().lock()),
        }
    }
}
