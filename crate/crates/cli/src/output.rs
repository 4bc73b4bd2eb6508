//! CSV tables and plain-text reports.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::CliError;

/// Seventeen significant digits, enough to round-trip an `f64`.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// `re, im` as two cells.
pub fn complex(z: Complex64) -> [String; 2] {
    [float(z.re), float(z.im)]
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

pub fn write_csv(path: &Path, table: &Table) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(format!("writing {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(&table.header).map_err(io)?;
    for row in &table.rows {
        w.write_record(row).map_err(io)?;
    }
    w.flush()
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

/// `results.csv` becomes `results.report.txt`.
pub fn report_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("report.txt")
}

pub fn write_report(path: &Path, text: &str) -> Result<(), CliError> {
    File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    /// `value ≤ limit`, failing on NaN.
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self::new(name, value <= limit, format!("{value:.3e} (limit {limit:.1e})"))
    }
}

/// Everything an experiment produces.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// The report body; only `header` may vary between identical runs.
pub fn render_report(header: &[String], config: &[String], outcome: &Outcome) -> String {
    let mut s = String::new();
    for line in header {
        s.push_str(line);
        s.push('\n');
    }
    s.push('\n');
    for line in config {
        s.push_str(&format!("  {line}\n"));
    }
    if !outcome.notes.is_empty() {
        s.push('\n');
        for line in &outcome.notes {
            s.push_str(line);
            s.push('\n');
        }
    }
    s.push('\n');
    for c in &outcome.checks {
        s.push_str(&format!(
            "{} {}: {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    let passed = outcome.checks.iter().filter(|c| c.passed).count();
    s.push_str(&format!(
        "result: {} ({passed}/{} checks passed)\n",
        if outcome.passed() { "PASS" } else { "FAIL" },
        outcome.checks.len()
    ));
    s
}
