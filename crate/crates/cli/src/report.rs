//! Run reports: a `#`-prefixed header echoing the command and its
//! configuration, a CSV table, and trailing `#` summary lines.

use std::fmt::Write as _;
use std::time::Duration;

#[derive(Debug, Default)]
pub struct RunReport {
    pub command: String,
    pub config: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Vec<(String, String)>,
    /// Limits that cut the computation short.
    pub budget_flags: Vec<String>,
    pub elapsed: Duration,
}

impl RunReport {
    pub fn new(command: &str) -> RunReport {
        RunReport {
            command: command.to_string(),
            ..RunReport::default()
        }
    }

    pub fn config(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.config.push((key.to_string(), value.to_string()));
        self
    }

    pub fn columns(&mut self, cols: &[&str]) -> &mut Self {
        self.header = cols.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn summary(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.summary.push((key.to_string(), value.to_string()));
        self
    }

    pub fn flag(&mut self, f: impl Into<String>) {
        self.budget_flags.push(f.into());
    }

    /// Everything except the timing, which goes to standard error so that
    /// the report itself is reproducible.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# command: {}", self.command);
        for (k, v) in &self.config {
            let _ = writeln!(out, "# {k}: {v}");
        }
        if !self.header.is_empty() {
            let _ = writeln!(out, "{}", self.header.join(","));
            for r in &self.rows {
                let _ = writeln!(out, "{}", r.join(","));
            }
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let flags = if self.budget_flags.is_empty() {
            "none".to_string()
        } else {
            self.budget_flags.join("; ")
        };
        let _ = writeln!(out, "# budget flags: {flags}");
        out
    }
}

/// Fixed-precision float formatting for tables.
pub fn f(x: f64) -> String {
    format!("{x:.12}")
}
