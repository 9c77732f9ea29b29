use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::constructions::Verdict;
use crate::validation::ValidationReport;

/// Process exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Success,
    Violation,
    InputError,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Violation => 1,
            Status::InputError => 2,
        }
    }
}

/// One pass/fail check with its witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn from_verdict(name: impl Into<String>, v: &Verdict) -> Self {
        Check { name: name.into(), passed: v.passed, checked: v.checked, witnesses: v.witness.iter().cloned().collect() }
    }

    pub fn from_validation(name: impl Into<String>, r: &ValidationReport) -> Self {
        Check { name: name.into(), passed: r.is_valid(), checked: 1, witnesses: r.violations.iter().map(|v| format!("[{}] {}", v.rule, v.witness)).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub field: String,
    pub status: Status,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(command: &str, field: String) -> Self {
        Report { command: command.to_string(), field, status: Status::Success, checks: Vec::new(), tables: Vec::new(), diagnostics: Vec::new() }
    }

    pub fn input_error(command: &str, field: String, diagnostics: Vec<String>) -> Self {
        Report { status: Status::InputError, diagnostics, ..Report::new(command, field) }
    }

    pub fn check(&mut self, check: Check) {
        if !check.passed && self.status == Status::Success {
            self.status = Status::Violation;
        }
        self.checks.push(check);
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn table_named(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Plain-text rendering with aligned columns.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} over {}: {}", self.command, self.field, status_word(self.status));
        for d in &self.diagnostics {
            let _ = writeln!(out, "error: {d}");
        }
        if !self.checks.is_empty() {
            let mut t = Table::new("checks", &["check", "result", "cases"]);
            for c in &self.checks {
                t.push(vec![c.name.clone().into(), if c.passed { "pass" } else { "FAIL" }.into(), c.checked.into()]);
            }
            out.push('\n');
            render(&mut out, &t);
            for c in self.checks.iter().filter(|c| !c.passed) {
                for w in &c.witnesses {
                    let _ = writeln!(out, "  {}: {w}", c.name);
                }
            }
        }
        for t in &self.tables {
            out.push('\n');
            render(&mut out, t);
        }
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Success => "ok",
        Status::Violation => "violation",
        Status::InputError => "input error",
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn render(out: &mut String, t: &Table) {
    let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
    let widths: Vec<usize> =
        (0..t.columns.len()).map(|j| cells.iter().filter_map(|r| r.get(j)).map(|c| c.chars().count()).chain([t.columns[j].len()]).max().unwrap_or(0)).collect();
    let line =
        |parts: Vec<&str>| -> String { parts.iter().zip(&widths).map(|(p, w)| format!("{p:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string() };
    let _ = writeln!(out, "{}", t.name);
    let _ = writeln!(out, "{}", line(t.columns.iter().map(String::as_str).collect()));
    let _ = writeln!(out, "{}", line(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().iter().map(String::as_str).collect()));
    for r in &cells {
        let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_check_sets_violation() {
        let mut r = Report::new("validate", "F_2".into());
        r.check(Check { name: "a".into(), passed: true, checked: 3, witnesses: vec![] });
        assert_eq!(r.status, Status::Success);
        r.check(Check { name: "b".into(), passed: false, checked: 1, witnesses: vec!["w".into()] });
        assert_eq!(r.status.code(), 1);
        let text = r.render_table();
        assert!(text.contains("b      FAIL    1"), "{text}");
        assert!(text.contains("  b: w"));
    }

    #[test]
    fn json_has_status() {
        let r = Report::input_error("ext", "Q".into(), vec!["bad".into()]);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["status"], "input-error");
        assert_eq!(v["diagnostics"][0], "bad");
    }
}
