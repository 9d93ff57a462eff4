use serde::{Deserialize, Serialize};

use crate::perm::permutation::standardize_small;
use crate::perm::Pattern;

/// One way an occurrence of a pattern can sit across `pi1 n pi2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SplitTerm {
    pub prefix: Pattern,
    pub suffix: Pattern,
    /// Whether the maximal entry `n` is part of the occurrence.
    pub uses_max: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitDecomposition {
    pub pattern: Pattern,
    pub terms: Vec<SplitTerm>,
}

fn above(prefix: &[u32], suffix: &[u32]) -> bool {
    match (prefix.iter().min(), suffix.iter().max()) {
        (Some(lo), Some(hi)) => lo > hi,
        _ => true,
    }
}

/// Every split of `p` into a part inside `pi1` and a part inside `pi2`,
/// optionally with the pattern maximum played by `n`.
pub fn split_decompose(p: &Pattern) -> SplitDecomposition {
    let e = p.entries();
    let len = e.len();
    let mut terms = Vec::new();
    for i in 0..=len {
        if above(&e[..i], &e[i..]) {
            terms.push(SplitTerm {
                prefix: standardize_small(&e[..i]),
                suffix: standardize_small(&e[i..]),
                uses_max: false,
            });
        }
        if i < len && e[i] as usize == len && above(&e[..i], &e[i + 1..]) {
            terms.push(SplitTerm {
                prefix: standardize_small(&e[..i]),
                suffix: standardize_small(&e[i + 1..]),
                uses_max: true,
            });
        }
    }
    SplitDecomposition { pattern: p.clone(), terms }
}
