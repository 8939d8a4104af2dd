//! Verification reports shared by every suite.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: String,
    pub detail: String,
}

/// Outcome of one verification suite. Serialises as
/// `{name, cases, passed, failures, first_failure, notes}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    /// Informational findings that are not failures.
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn new(name: impl Into<String>) -> Self {
        SuiteReport { name: name.into(), cases: 0, failures: Vec::new(), notes: Vec::new() }
    }

    /// Records one case; `Err` carries the mismatch description.
    pub fn record(&mut self, case: impl Into<String>, outcome: Result<(), String>) {
        self.cases += 1;
        if let Err(detail) = outcome {
            self.failures.push(Failure { case: case.into(), detail });
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }
}

impl Serialize for SuiteReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            name: &'a str,
            cases: usize,
            passed: bool,
            failures: usize,
            first_failure: Option<&'a Failure>,
            notes: &'a [String],
        }
        Repr {
            name: &self.name,
            cases: self.cases,
            passed: self.passed(),
            failures: self.failures.len(),
            first_failure: self.first_failure(),
            notes: &self.notes,
        }
        .serialize(serializer)
    }
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} cases)", self.name, self.cases)?;
        if let Some(first) = self.first_failure() {
            write!(f, ": {} failing, first {}: {}", self.failures.len(), first.case, first.detail)?;
        }
        Ok(())
    }
}
