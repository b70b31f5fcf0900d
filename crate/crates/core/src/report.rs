use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    InsufficientPrecision,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::InsufficientPrecision => "insufficient-precision",
        })
    }
}

/// First violation found by a check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// `value` at `argument = A*n + B` is nonzero (mod M, or exactly for
    /// vanishing checks).
    Claim { n: u64, argument: u64, value: String },
    /// Two series differ at exponent `index`.
    Coefficient { index: usize, left: String, right: String },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::Claim { n, argument, value } => {
                write!(f, "n = {n}, argument {argument}, value {value}")
            }
            Counterexample::Coefficient { index, left, right } => {
                write!(f, "exponent {index}: lhs {left}, rhs {right}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub status: Status,
    /// Number of coefficients (or claim instances) actually compared.
    pub n_checked: usize,
    /// Deepest series truncation order or table length used.
    pub depth: usize,
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    /// Wall time; kept out of serialized output so reports are reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn pass(id: impl Into<String>, n_checked: usize, depth: usize) -> Self {
        VerificationReport {
            id: id.into(),
            status: Status::Pass,
            n_checked,
            depth,
            counterexample: None,
            note: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn fail(id: impl Into<String>, n_checked: usize, depth: usize, counterexample: Counterexample) -> Self {
        VerificationReport {
            status: Status::Fail,
            counterexample: Some(counterexample),
            ..Self::pass(id, n_checked, depth)
        }
    }

    pub fn insufficient(id: impl Into<String>, depth: usize, note: impl Into<String>) -> Self {
        VerificationReport {
            status: Status::InsufficientPrecision,
            note: Some(note.into()),
            ..Self::pass(id, 0, depth)
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_elapsed(mut self, elapsed: Duration) -> Self {
        self.elapsed = elapsed;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.status {
            Status::Pass => write!(f, "{} pass ({} terms)", self.id, self.n_checked)?,
            Status::Fail => {
                write!(f, "{} fail", self.id)?;
                if let Some(c) = &self.counterexample {
                    write!(f, " at {c}")?;
                }
                write!(f, " ({} terms)", self.n_checked)?;
            }
            Status::InsufficientPrecision => write!(f, "{} insufficient-precision", self.id)?,
        }
        if let Some(note) = &self.note {
            write!(f, " [{note}]")?;
        }
        Ok(())
    }
}
