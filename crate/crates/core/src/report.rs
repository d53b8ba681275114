//! Pass/fail bookkeeping shared by the verification suites.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Number of individual instances examined.
    pub instances: u64,
    /// First failing instance, if any.
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>, instances: u64) -> Self {
        Check {
            name: name.into(),
            passed: true,
            instances,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, instances: u64, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: false,
            instances,
            witness: Some(witness.into()),
        }
    }
}

/// Accumulates a named check from a stream of instances, keeping the first
/// failure as witness.
#[derive(Debug)]
pub struct CheckBuilder {
    name: String,
    instances: u64,
    witness: Option<String>,
}

impl CheckBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        CheckBuilder {
            name: name.into(),
            instances: 0,
            witness: None,
        }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    pub fn finish(self) -> Check {
        Check {
            name: self.name,
            passed: self.witness.is_none(),
            instances: self.instances,
            witness: self.witness,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Turns the first failing check into an error.
    pub fn ensure(self) -> Result<Report> {
        if let Some(c) = self.failures().next() {
            return Err(Error::verification(
                c.name.clone(),
                c.witness.clone().unwrap_or_default(),
            ));
        }
        Ok(self)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "{status}  {:<48} n={}", c.name, c.instances)?;
            if let Some(w) = &c.witness {
                write!(f, "  witness: {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
