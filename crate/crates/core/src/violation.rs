use std::fmt;

use serde::Serialize;

/// A failed axiom check, with the basis indices that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub witness: Vec<usize>,
    pub detail: String,
}

impl Violation {
    pub fn new(check: &str, witness: Vec<usize>, detail: impl Into<String>) -> Self {
        Violation {
            check: check.to_string(),
            witness,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at {:?}: {}", self.check, self.witness, self.detail)
    }
}
