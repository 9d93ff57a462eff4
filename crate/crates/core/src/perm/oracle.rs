//! Brute-force weight enumerators: the independent reference every
//! recurrence-based result is checked against.

use super::avoiders::{enumerate_avoiders_with_limit, ORACLE_LIMIT};
use super::permutation::{count_occurrences, Pattern};
use super::umap::sigma_stats;
use super::Family;
use crate::arith::{var_list, Monomial, MultiPoly, Rational, VarList};
use crate::error::{internal, usage, Result};

/// `sum_{pi in family(n)} prod_i vars[i]^{a_{stats[i]}(pi)}` by full enumeration.
pub fn brute_weight_enum(family: Family, stats: &[Pattern], vars: &VarList, n: usize) -> Result<MultiPoly> {
    brute_weight_enum_with_limit(family, stats, vars, n, ORACLE_LIMIT)
}

pub fn brute_weight_enum_with_limit(
    family: Family,
    stats: &[Pattern],
    vars: &VarList,
    n: usize,
    limit: usize,
) -> Result<MultiPoly> {
    if stats.len() != vars.len() {
        return Err(usage("one variable per statistic is required"));
    }
    let mut out = MultiPoly::zero(vars.clone());
    for pi in enumerate_avoiders_with_limit(&family.forbidden(), n, limit)? {
        let e: Vec<u32> = stats.iter().map(|p| count_occurrences(p, &pi) as u32).collect();
        out.add_term(Monomial::from_slice(&e), Rational::from(1));
    }
    Ok(out)
}

/// Single-statistic enumerator in the variable `t`.
pub fn brute_weight_enum_t(family: Family, stat: &Pattern, n: usize) -> Result<MultiPoly> {
    brute_weight_enum(family, std::slice::from_ref(stat), &var_list(&["t"]), n)
}

/// `sum_{pi in AV123(n)} t^{a_213} s1^{sigma1} s2^{sigma2}`.
pub fn sigma_weight_enum(n: usize) -> Result<MultiPoly> {
    let p213: Pattern = Pattern::from_vec_unchecked(vec![2, 1, 3]);
    let mut out = MultiPoly::zero(var_list(&["t", "s1", "s2"]));
    for pi in enumerate_avoiders_with_limit(&Family::Av123.forbidden(), n, ORACLE_LIMIT)? {
        let (s1, s2) = sigma_stats(&pi)?;
        if s1 < 0 || s2 < 0 {
            return Err(internal(format!("negative sigma statistic on {pi}: ({s1}, {s2})")));
        }
        let a = count_occurrences(&p213, &pi) as u32;
        out.add_term(Monomial::from_slice(&[a, s1 as u32, s2 as u32]), Rational::from(1));
    }
    Ok(out)
}
