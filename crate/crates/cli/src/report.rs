//! Report assembly and bit-stable serialization.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Less,
    AtMost,
    AtLeast,
    Greater,
    Flag,
}

/// One pass/fail record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub relation: Relation,
    pub passed: bool,
}

impl Check {
    pub fn less(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::build(name, value, threshold, Relation::Less, value < threshold)
    }

    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::build(name, value, threshold, Relation::AtMost, value <= threshold)
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::build(
            name,
            value,
            threshold,
            Relation::AtLeast,
            value >= threshold,
        )
    }

    pub fn greater(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::build(name, value, threshold, Relation::Greater, value > threshold)
    }

    /// Boolean check; `value` is 1 or 0.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::build(name, if ok { 1.0 } else { 0.0 }, 1.0, Relation::Flag, ok)
    }

    fn build(
        name: impl Into<String>,
        value: f64,
        threshold: f64,
        relation: Relation,
        passed: bool,
    ) -> Self {
        // NaN never passes
        let passed = passed && !value.is_nan();
        Self {
            name: name.into(),
            value,
            threshold,
            relation,
            passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Header plus rows, every value with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    pub notes: BTreeMap<String, serde_json::Value>,
    pub passed: bool,
    /// Where the report goes; kept out of the serialized config so that the
    /// bytes do not depend on the destination.
    #[serde(skip)]
    pub destination: Option<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, config: &RunConfig) -> Self {
        Self {
            command: command.into(),
            config: RunConfig {
                output_path: None,
                ..config.clone()
            },
            checks: Vec::new(),
            tables: Vec::new(),
            notes: BTreeMap::new(),
            passed: true,
            destination: config.output_path.clone(),
        }
    }

    pub fn check(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn table(&mut self, table: Table) {
        self.tables.push(table);
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.notes.insert(key.to_string(), value);
    }

    pub fn find_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn find_table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    /// CSV carries only the primary (first) table; JSON carries everything.
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => Ok(self.tables.first().map(Table::to_csv).unwrap_or_default()),
        }
    }

    /// Writes to the configured output path, or stdout.
    pub fn emit(&self) -> Result<()> {
        let text = self.render(self.config.format)?;
        match &self.destination {
            Some(path) => std::fs::write(Path::new(path), text).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            }),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|source| CliError::Io {
                        path: "<stdout>".into(),
                        source,
                    })
            }
        }
    }
}
