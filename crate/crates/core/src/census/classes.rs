use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::average::{AverageEngine, Count};
use crate::arith::{binomial, catalan_table};
use crate::error::{usage, Result};
use crate::perm::{classify_all_subsets, enumerate_avoiders, enumerate_avoiders_with_limit, Family, Pattern, ORACLE_LIMIT};

/// Default sequence-prefix length for the 132 census.
pub const DEFAULT_PREFIX_LEN: usize = 30;

/// Published class counts for the 123 family, `k = 1..=6`.
pub const PUBLISHED_123: [u64; 6] = [1, 2, 3, 6, 12, 32];

/// Largest `k` for which the 132 counts are known to equal `p(k)`.
pub const PROVED_132_MAX_K: usize = 10;

/// Number of sequence values printed per class in a report.
pub const REPORT_VALUES: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BonaClass {
    /// Lexicographically least member.
    pub representative: Pattern,
    pub members: Vec<Pattern>,
    /// `A_p(0..=n_max)` shared by every member.
    #[serde(with = "crate::serde_util::big_vec")]
    pub values: Vec<BigUint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub family: Family,
    pub k: usize,
    /// Largest `n` whose value entered the comparison.
    pub n_max: usize,
    pub classes: Vec<BonaClass>,
}

impl Census {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Class pairs that agree on every compared value except the last,
    /// i.e. distinctions resting on a single term.
    pub fn fragile_pairs(&self) -> Vec<(Pattern, Pattern)> {
        let mut out = Vec::new();
        for (i, a) in self.classes.iter().enumerate() {
            for b in &self.classes[i + 1..] {
                let m = a.values.len().saturating_sub(1);
                if a.values[..m] == b.values[..m] {
                    out.push((a.representative.clone(), b.representative.clone()));
                }
            }
        }
        out
    }
}

fn group(family: Family, k: usize, n_max: usize, rows: Vec<(Pattern, Vec<BigUint>)>) -> Census {
    let mut by_seq: BTreeMap<Vec<BigUint>, Vec<Pattern>> = BTreeMap::new();
    for (p, v) in rows {
        by_seq.entry(v).or_default().push(p);
    }
    let mut classes: Vec<BonaClass> = by_seq
        .into_iter()
        .map(|(values, mut members)| {
            members.sort();
            BonaClass { representative: members[0].clone(), members, values }
        })
        .collect();
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Census { family, k, n_max, classes }
}

fn fits_u128(n_max: usize) -> bool {
    let cat = catalan_table(n_max);
    let widest = binomial(n_max as u64, n_max as u64 / 2) * &cat[n_max];
    widest.bits() < 127
}

fn rows_with<T: Count + Into<BigUint>>(patterns: &[Pattern], n_max: usize) -> Option<Vec<(Pattern, Vec<BigUint>)>> {
    let engine = AverageEngine::<T>::new(patterns, n_max)?;
    Some(
        patterns
            .iter()
            .map(|p| (p.clone(), engine.values(p).expect("root in closure").iter().cloned().map(Into::into).collect()))
            .collect(),
    )
}

/// Groups the 132-avoiding patterns of length `k` by `A_p(0..=prefix_len)`.
pub fn bona_census_132(k: usize, prefix_len: usize) -> Result<Census> {
    if k == 0 {
        return Err(usage("pattern length k must be >= 1"));
    }
    if prefix_len < 2 * k {
        return Err(usage(format!("prefix length {prefix_len} must be at least 2k = {}", 2 * k)));
    }
    let patterns = enumerate_avoiders(&Family::Av132.forbidden(), k)?;
    let rows = if fits_u128(prefix_len) {
        rows_with::<u128>(&patterns, prefix_len)
    } else {
        None
    };
    let rows = rows.unwrap_or_else(|| rows_with::<BigUint>(&patterns, prefix_len).expect("BigUint holds everything"));
    Ok(group(Family::Av132, k, prefix_len, rows))
}

/// Groups the 123-avoiding patterns of length `k` by brute-force `A_p(0..=n_max)` over `AV123`.
pub fn bona_census_123(k: usize, n_max: usize) -> Result<Census> {
    if k == 0 {
        return Err(usage("pattern length k must be >= 1"));
    }
    if n_max > ORACLE_LIMIT {
        return Err(usage(format!("n_max = {n_max} exceeds the brute-force limit {ORACLE_LIMIT}")));
    }
    let forbidden = Family::Av123.forbidden();
    let patterns = enumerate_avoiders(&forbidden, k)?;
    let columns: Vec<BTreeMap<Pattern, u64>> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut tally: BTreeMap<Pattern, u64> = BTreeMap::new();
            if n >= k {
                for pi in enumerate_avoiders_with_limit(&forbidden, n, ORACLE_LIMIT)? {
                    for (p, c) in classify_all_subsets(&pi, k)? {
                        *tally.entry(p).or_insert(0) += c;
                    }
                }
            }
            Ok(tally)
        })
        .collect::<Result<_>>()?;
    let rows = patterns
        .into_iter()
        .map(|p| {
            let v = columns.iter().map(|col| BigUint::from(col.get(&p).copied().unwrap_or(0))).collect();
            (p, v)
        })
        .collect();
    Ok(group(Family::Av123, k, n_max, rows))
}

/// Integer partitions `p(k)` by Euler's pentagonal recurrence.
pub fn partition_numbers(k: usize) -> BigUint {
    partition_table(k).pop().expect("table is nonempty")
}

pub fn partition_table(k: usize) -> Vec<BigUint> {
    let mut p: Vec<num_bigint::BigInt> = vec![One::one()];
    for m in 1..=k as i64 {
        let mut acc = num_bigint::BigInt::zero();
        for j in 1.. {
            let g1 = j * (3 * j - 1) / 2;
            if g1 > m {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc += sign * &p[(m - g1) as usize];
            let g2 = j * (3 * j + 1) / 2;
            if g2 <= m {
                acc += sign * &p[(m - g2) as usize];
            }
        }
        p.push(acc);
    }
    p.into_iter().map(|x| x.to_biguint().expect("partition numbers are positive")).collect()
}

/// The value a census is compared against, if one is known.
pub fn expected_count(family: Family, k: usize) -> Option<BigUint> {
    match family {
        Family::Av132 => Some(partition_numbers(k)),
        Family::Av123 => PUBLISHED_123.get(k.wrapping_sub(1)).map(|&c| BigUint::from(c)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub representative: Pattern,
    pub size: usize,
    #[serde(with = "crate::serde_util::big_vec")]
    pub values: Vec<BigUint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub family: Family,
    pub k: usize,
    pub n_max: usize,
    pub class_count: usize,
    #[serde(with = "crate::serde_util::big_opt")]
    pub expected: Option<BigUint>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    /// `proved` when the expected count is a theorem, `conjectural` otherwise.
    pub status: String,
    pub caveat: String,
    pub fragile_pairs: Vec<(Pattern, Pattern)>,
    pub classes: Vec<ClassSummary>,
}

impl CensusReport {
    pub fn new(c: &Census) -> Self {
        let expected = expected_count(c.family, c.k);
        let matches = expected.as_ref().map(|e| *e == BigUint::from(c.class_count()));
        let status = match c.family {
            Family::Av132 if c.k <= PROVED_132_MAX_K => "proved",
            _ => "conjectural",
        };
        let caveat = format!(
            "classes are groups of equal A_p(0..={}); equal prefixes do not prove equal sequences",
            c.n_max
        );
        CensusReport {
            family: c.family,
            k: c.k,
            n_max: c.n_max,
            class_count: c.class_count(),
            expected,
            matches,
            status: status.to_string(),
            caveat,
            fragile_pairs: c.fragile_pairs(),
            classes: c
                .classes
                .iter()
                .map(|cl| ClassSummary {
                    representative: cl.representative.clone(),
                    size: cl.members.len(),
                    values: cl.values.iter().take(REPORT_VALUES).cloned().collect(),
                })
                .collect(),
        }
    }
}
