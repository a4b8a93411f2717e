//! The output record shared by every subcommand, and its three renderings.

use std::fmt::Write as _;

use bosonkit_core::ErrorBoundedReal;
use indexmap::IndexMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

/// One table cell. Numbers are always strings so nothing is lost to `f64`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    /// Integer or rational, exact.
    Exact {
        exact: String,
    },
    /// Decimal value with an absolute error bound.
    Approx {
        value: String,
        abs_error: String,
    },
    Text(String),
}

impl Cell {
    pub fn integer(x: &BigInt) -> Self {
        Cell::Exact { exact: x.to_string() }
    }

    pub fn count(x: impl Into<BigInt>) -> Self {
        Cell::integer(&x.into())
    }

    pub fn rational(x: &BigRational) -> Self {
        Cell::Exact { exact: x.to_string() }
    }

    pub fn exact(s: impl Into<String>) -> Self {
        Cell::Exact { exact: s.into() }
    }

    pub fn real(x: &ErrorBoundedReal) -> Self {
        Cell::Approx { value: x.to_decimal_string(real_digits(x)), abs_error: format_bound(x.abs_error_f64()) }
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn plain(&self) -> String {
        match self {
            Cell::Exact { exact } => exact.clone(),
            Cell::Approx { value, abs_error } => format!("{value} ± {abs_error}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

// Enough fractional digits to show the value down to its error bound.
fn real_digits(x: &ErrorBoundedReal) -> u32 {
    let err = x.abs_error_f64();
    if err > 0.0 {
        ((-err.log10()).ceil() + 3.0).clamp(6.0, 80.0) as u32
    } else {
        12
    }
}

/// Three significant digits, never below the true bound.
pub fn format_bound(err: f64) -> String {
    if err == 0.0 {
        return "0".into();
    }
    let padded = err * (1.0 + 1e-3);
    let exp = padded.log10().floor() as i32;
    let mantissa = (padded / 10f64.powi(exp) * 100.0).ceil() / 100.0;
    format!("{mantissa:.2}e{exp}")
}

pub type Row = IndexMap<String, Cell>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema: u32,
    pub command: String,
    pub parameters: IndexMap<String, String>,
    pub results: Vec<Row>,
    pub checks: Vec<Check>,
}

impl OutputRecord {
    pub fn new(command: impl Into<String>) -> Self {
        OutputRecord {
            schema: SCHEMA,
            command: command.into(),
            parameters: IndexMap::new(),
            results: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.into(), value.to_string());
        self
    }

    pub fn push_row<const N: usize>(&mut self, cells: [(&str, Cell); N]) {
        self.results.push(cells.into_iter().map(|(k, v)| (k.to_string(), v)).collect());
    }

    pub fn push_check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        let status = if passed { Status::Pass } else { Status::Fail };
        self.checks.push(Check { name: name.into(), status, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    /// Appends the rows and checks of `other`, tagging rows with `suite` and
    /// prefixing check names with it.
    pub fn absorb(&mut self, suite: &str, other: OutputRecord) {
        for row in other.results {
            let mut tagged = Row::new();
            tagged.insert("suite".into(), Cell::text(suite));
            tagged.extend(row);
            self.results.push(tagged);
        }
        for mut check in other.checks {
            check.name = format!("{suite}: {}", check.name);
            self.checks.push(check);
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Plain => self.to_plain(),
        }
    }

    // Approximate cells take two columns, `name` and `name_abs_error`.
    fn columns(&self) -> Vec<(String, bool)> {
        let mut cols: IndexMap<String, bool> = IndexMap::new();
        for row in &self.results {
            for (k, v) in row {
                let approx = matches!(v, Cell::Approx { .. });
                *cols.entry(k.clone()).or_insert(false) |= approx;
            }
        }
        cols.into_iter().collect()
    }

    pub fn to_csv(&self) -> String {
        let cols = self.columns();
        let mut out = Vec::new();
        {
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(&mut out);
            let mut header = Vec::new();
            for (name, approx) in &cols {
                header.push(name.clone());
                if *approx {
                    header.push(format!("{name}_abs_error"));
                }
            }
            if !header.is_empty() {
                w.write_record(&header).expect("in-memory write");
            }
            for row in &self.results {
                let mut fields = Vec::new();
                for (name, approx) in &cols {
                    match row.get(name) {
                        Some(Cell::Approx { value, abs_error }) => {
                            fields.push(value.clone());
                            fields.push(abs_error.clone());
                        }
                        Some(cell) => {
                            fields.push(cell.plain());
                            if *approx {
                                fields.push(String::new());
                            }
                        }
                        None => {
                            fields.push(String::new());
                            if *approx {
                                fields.push(String::new());
                            }
                        }
                    }
                }
                w.write_record(&fields).expect("in-memory write");
            }
            if !self.checks.is_empty() {
                if !self.results.is_empty() {
                    w.write_record([""]).expect("in-memory write");
                }
                w.write_record(["check", "status", "detail"]).expect("in-memory write");
                for c in &self.checks {
                    let status = if c.status == Status::Pass { "pass" } else { "fail" };
                    w.write_record([c.name.as_str(), status, c.detail.as_str()]).expect("in-memory write");
                }
            }
            w.flush().expect("in-memory write");
        }
        String::from_utf8(out).expect("csv output is utf-8")
    }

    pub fn to_plain(&self) -> String {
        let mut s = String::new();
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(s, "{} {}", self.command, params.join(" "));

        let cols: Vec<String> = self.columns().into_iter().map(|(name, _)| name).collect();
        if !cols.is_empty() {
            let cells: Vec<Vec<String>> = self
                .results
                .iter()
                .map(|row| cols.iter().map(|c| row.get(c).map(Cell::plain).unwrap_or_default()).collect())
                .collect();
            let widths: Vec<usize> = cols
                .iter()
                .enumerate()
                .map(|(i, c)| cells.iter().map(|r| r[i].chars().count()).chain([c.chars().count()]).max().unwrap_or(0))
                .collect();
            let line = |fields: &[String]| {
                let padded: Vec<String> = fields.iter().zip(&widths).map(|(f, w)| format!("{f:<w$}", w = *w)).collect();
                padded.join("  ").trim_end().to_string()
            };
            let _ = writeln!(s, "{}", line(&cols));
            for row in &cells {
                let _ = writeln!(s, "{}", line(row));
            }
        }
        for c in &self.checks {
            let status = if c.status == Status::Pass { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{status}  {}: {}", c.name, c.detail);
        }
        if !self.checks.is_empty() {
            let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
            let _ = writeln!(s, "{} checks, {} failed", self.checks.len(), failed);
        }
        s
    }
}
