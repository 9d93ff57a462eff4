//! Guessing P-recurrences, algebraic equations and closed forms from exact data.

mod algebraic;
mod closed_form;
pub(crate) mod linalg;
mod precursive;

use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};

pub use algebraic::{guess_algebraic, AlgebraicEquation};
pub use closed_form::{fit_closed_form, BasisKind, BasisTerm, ClosedFormFit};
pub use linalg::nullspace;
pub use precursive::{guess_p_recursive, p_recursive_min_last_index, verify_recurrence, PRecurrence, Verification};

/// Default number of held-out terms.
pub const DEFAULT_HOLDOUT: usize = 10;

/// Exact sequence `a(offset), a(offset+1), ...`; also the sequence-file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sequence {
    pub name: String,
    #[serde(default)]
    pub offset: i64,
    pub values: Vec<Rational>,
}

impl Sequence {
    pub fn new(name: impl Into<String>, offset: i64, values: Vec<Rational>) -> Self {
        Sequence { name: name.into(), offset, values }
    }

    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Parse(format!("sequence file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sequence serializes")
    }
}
