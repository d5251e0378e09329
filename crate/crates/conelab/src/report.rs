//! Pass/fail reports with replayable counterexamples.
//!
//! Law checkers never abort on a violation; they record every failure as a
//! `{law, witness}` pair so a caller (or the CLI) can print or serialize the
//! whole picture deterministically.

use serde::Serialize;

/// One failed check: which law broke and on which inputs.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LawFailure {
    pub law: String,
    pub witness: String,
}

/// Outcome of a batch of checks.
#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    /// What was checked, e.g. `cone axioms on {bot,a,b,top}`.
    pub subject: String,
    /// Number of individual checks run.
    pub checks: usize,
    pub failures: Vec<LawFailure>,
}

impl LawReport {
    pub fn new(subject: impl Into<String>) -> Self {
        LawReport {
            subject: subject.into(),
            checks: 0,
            failures: Vec::new(),
        }
    }

    /// Records one check; on failure, `witness` must make the failing
    /// instance reproducible.
    pub fn record(&mut self, ok: bool, law: &str, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(LawFailure {
                law: law.to_string(),
                witness: witness(),
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Folds another report into this one.
    pub fn absorb(&mut self, other: LawReport) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

impl std::fmt::Display for LawReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.passed() {
            write!(f, "{}: pass ({} checks)", self.subject, self.checks)
        } else {
            writeln!(
                f,
                "{}: FAIL ({} of {} checks)",
                self.subject,
                self.failures.len(),
                self.checks
            )?;
            for failure in &self.failures {
                writeln!(f, "  {}: {}", failure.law, failure.witness)?;
            }
            Ok(())
        }
    }
}
