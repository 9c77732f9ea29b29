use std::fmt;

use serde::Serialize;

/// One failed axiom, with enough detail to locate it in a hand-built fixture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: String,
    pub witness: String,
}

/// Violations are data: an empty report means every checked axiom holds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, rule: impl Into<String>, witness: impl Into<String>) {
        self.violations.push(Violation { rule: rule.into(), witness: witness.into() });
    }

    /// Appends `other`, prefixing each witness with `context`.
    pub fn merge(&mut self, context: &str, other: ValidationReport) {
        for v in other.violations {
            self.violations.push(Violation { rule: v.rule, witness: format!("{context}: {}", v.witness) });
        }
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "[{}] {}", v.rule, v.witness)?;
        }
        Ok(())
    }
}
