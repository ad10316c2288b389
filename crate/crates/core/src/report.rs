use serde::{Deserialize, Serialize};

/// Outcome of one exhaustive check: how many cases were examined and the
/// first counterexample, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, cases: usize, witness: Option<String>) -> Self {
        Check { name: name.into(), passed: witness.is_none(), cases, witness }
    }

    /// Runs `test` over every case and stops at the first failure.
    pub fn over<I, T, F>(name: impl Into<String>, cases: I, mut test: F) -> Self
    where
        I: IntoIterator<Item = T>,
        F: FnMut(T) -> Result<(), String>,
    {
        let mut count = 0;
        for case in cases {
            count += 1;
            if let Err(w) = test(case) {
                return Check::new(name, count, Some(w));
            }
        }
        Check::new(name, count, None)
    }

    pub fn single(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        Check::new(name, 1, if ok { None } else { Some(witness()) })
    }
}

/// A named group of checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub subject: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(subject: impl Into<String>) -> Self {
        CheckReport { subject: subject.into(), checks: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}
