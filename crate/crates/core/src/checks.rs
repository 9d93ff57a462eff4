//! Cross-checks of the recurrence engines against brute force.

use serde::{Deserialize, Serialize};

use crate::arith::{catalan_table, Rational};
use crate::census::AverageEngine;
use crate::error::Result;
use crate::funceq::{builtin_spec, catalog, eval_full, eval_truncated};
use crate::perm::umap::validate_readings;
use crate::perm::{brute_weight_enum_t, count_occurrences, enumerate_avoiders, sigma_weight_enum, Family, Pattern};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed, detail: detail.into() }
    }
}

/// Every catalog recurrence, specialized to `t`, against the brute-force enumerator.
pub fn catalog_vs_brute(max_n: usize) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for (family, stat) in catalog() {
        let pat: Pattern = stat.parse()?;
        let seq = eval_full(&builtin_spec(family, &pat)?, max_n)?.marginal()?;
        let mut bad = None;
        for (n, poly) in seq.full().expect("full mode").iter().enumerate() {
            if poly != &brute_weight_enum_t(family, &pat, n)? {
                bad = Some(n);
                break;
            }
        }
        let detail = match bad {
            None => format!("P_n(t) equal for n <= {max_n}"),
            Some(n) => format!("P_n(t) differs at n = {n}"),
        };
        out.push(CheckResult::new(format!("wenum {family}/{stat}"), bad.is_none(), detail));
    }
    Ok(out)
}

/// `Q_n(t, s1, s2)` of the AV123 recurrence against the sigma-weighted enumerator.
pub fn sigma_vs_recurrence(max_n: usize) -> Result<CheckResult> {
    let spec = builtin_spec(Family::Av123, &"213".parse()?)?;
    let seq = eval_full(&spec, max_n)?;
    for (n, q) in seq.full().expect("full mode").iter().enumerate() {
        if q != &sigma_weight_enum(n)? {
            return Ok(CheckResult::new("sigma enumerator", false, format!("Q_n differs at n = {n}")));
        }
    }
    Ok(CheckResult::new("sigma enumerator", true, format!("Q_n(t,s1,s2) equal for n <= {max_n}")))
}

/// The chosen U construction is the unique bijective reading.
pub fn u_map_readings(max_n: usize) -> CheckResult {
    match validate_readings(max_n) {
        Ok(checks) => {
            let failed: Vec<String> = checks
                .iter()
                .filter(|c| !c.bijective)
                .map(|c| format!("{} fails at n = {}", c.description, c.first_failure.unwrap_or(0)))
                .collect();
            CheckResult::new(
                "U map",
                true,
                format!("unique bijective reading for n <= {max_n}; {} others rejected", failed.len()),
            )
        }
        Err(e) => CheckResult::new("U map", false, e.to_string()),
    }
}

/// `A_p(n)` from the split recurrence against brute-force totals, all patterns of the given lengths.
pub fn averages_vs_brute(lengths: &[usize], max_n: usize) -> Result<Vec<CheckResult>> {
    let avoiders: Vec<Vec<_>> =
        (0..=max_n).map(|n| enumerate_avoiders(&Family::Av132.forbidden(), n)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for &len in lengths {
        let pats = crate::perm::Permutation::all(len);
        let engine = AverageEngine::<u128>::new(&pats, max_n).expect("small values fit");
        let mut bad = Vec::new();
        for p in &pats {
            let v = engine.values(p).expect("root");
            for n in 0..=max_n {
                let brute: u64 = avoiders[n].iter().map(|pi| count_occurrences(p, pi)).sum();
                if v[n] != brute as u128 {
                    bad.push(format!("{} at n = {n}", p.compact()));
                    break;
                }
            }
        }
        let detail = if bad.is_empty() {
            format!("{} patterns, n <= {max_n}", pats.len())
        } else {
            bad.join(", ")
        };
        out.push(CheckResult::new(format!("averages |p| = {len}"), bad.is_empty(), detail));
    }
    Ok(out)
}

/// All-ones masses of every catalog recurrence equal the Catalan numbers.
pub fn catalan_masses(max_n: usize) -> Result<CheckResult> {
    let cat = catalan_table(max_n);
    for (family, stat) in catalog() {
        let spec = builtin_spec(family, &stat.parse()?)?;
        let seq = eval_truncated(&spec, max_n, 1)?;
        for (n, m) in seq.masses().iter().enumerate() {
            if m != &Rational::from_integer(cat[n].clone()) {
                return Ok(CheckResult::new("Catalan masses", false, format!("{family}/{stat} at n = {n}")));
            }
        }
    }
    Ok(CheckResult::new("Catalan masses", true, format!("every catalog recurrence, n <= {max_n}")))
}

/// The full suite used by `oracle verify`.
pub fn oracle_suite(max_n: usize) -> Result<Vec<CheckResult>> {
    let mut out = vec![catalan_masses(60)?];
    out.extend(catalog_vs_brute(max_n)?);
    out.push(sigma_vs_recurrence(max_n.min(9))?);
    out.push(u_map_readings(max_n.min(8)));
    out.extend(averages_vs_brute(&[1, 2, 3, 4], max_n.min(9))?);
    Ok(out)
}
