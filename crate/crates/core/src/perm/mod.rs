//! Permutations, patterns and the two Catalan families `AV(132)`, `AV(123)`.

mod avoiders;
mod oracle;
pub(crate) mod permutation;
pub mod umap;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use avoiders::{compose_132, decompose_132, enumerate_avoiders, enumerate_avoiders_with_limit, ORACLE_LIMIT};
pub use oracle::{brute_weight_enum, brute_weight_enum_t, brute_weight_enum_with_limit, sigma_weight_enum};
pub use permutation::{classify_all_subsets, count_occurrences, standardize, Pattern, Permutation};
pub use umap::{sigma_stats, u_map, UReading};

use crate::error::Error;

/// The permutation class a statistic is defined on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Av132,
    Av123,
}

impl Family {
    pub fn forbidden(&self) -> Pattern {
        match self {
            Family::Av132 => Permutation::from_vec_unchecked(vec![1, 3, 2]),
            Family::Av123 => Permutation::from_vec_unchecked(vec![1, 2, 3]),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Av132 => "av132",
            Family::Av123 => "av123",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "av132" | "132" => Ok(Family::Av132),
            "av123" | "123" => Ok(Family::Av123),
            _ => Err(Error::Usage(format!("unknown family {s:?}; expected av132 or av123"))),
        }
    }
}
