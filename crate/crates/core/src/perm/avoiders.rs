use super::permutation::{Pattern, Permutation};
use crate::error::{usage, Result};

/// Default bound on `n` for anything that enumerates a whole family.
pub const ORACLE_LIMIT: usize = 12;

/// Every permutation of length `n` avoiding `forbidden`, in lexicographic order.
///
/// Built by prefix backtracking: a value is appended only if no occurrence
/// of the forbidden pattern ends at it.
pub fn enumerate_avoiders(forbidden: &Pattern, n: usize) -> Result<Vec<Permutation>> {
    enumerate_avoiders_with_limit(forbidden, n, ORACLE_LIMIT)
}

pub fn enumerate_avoiders_with_limit(forbidden: &Pattern, n: usize, limit: usize) -> Result<Vec<Permutation>> {
    if n > limit {
        return Err(usage(format!("n = {n} exceeds the oracle limit {limit}")));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    extend(forbidden.entries(), n, &mut prefix, &mut used, &mut out);
    Ok(out)
}

fn extend(forbidden: &[u32], n: usize, prefix: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Permutation>) {
    if prefix.len() == n {
        out.push(Permutation::from_vec_unchecked(prefix.clone()));
        return;
    }
    for v in 1..=n as u32 {
        if used[v as usize] {
            continue;
        }
        prefix.push(v);
        if !occurrence_ends_at_last(forbidden, prefix) {
            used[v as usize] = true;
            extend(forbidden, n, prefix, used, out);
            used[v as usize] = false;
        }
        prefix.pop();
    }
}

// Is there an occurrence of `p` using the last entry of `s` as its last letter?
fn occurrence_ends_at_last(p: &[u32], s: &[u32]) -> bool {
    let k = p.len();
    if k == 0 {
        return true;
    }
    if s.len() < k {
        return false;
    }
    let last = *s.last().unwrap();
    let lead = &s[..s.len() - 1];
    let mut chosen = Vec::with_capacity(k);
    fn rec(p: &[u32], lead: &[u32], last: u32, start: usize, chosen: &mut Vec<u32>) -> bool {
        let d = chosen.len();
        if d == p.len() - 1 {
            return true;
        }
        let need = p.len() - 1 - d;
        for pos in start..=lead.len().saturating_sub(need) {
            if pos >= lead.len() {
                break;
            }
            let v = lead[pos];
            let ok = (v < last) == (p[d] < p[p.len() - 1])
                && chosen.iter().zip(&p[..d]).all(|(&c, &pc)| (c < v) == (pc < p[d]));
            if ok {
                chosen.push(v);
                if rec(p, lead, last, pos + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    rec(p, lead, last, 0, &mut chosen)
}

/// Splits a 132-avoider as `pi = pi1 n pi2`, returning the position `k` of
/// `n` (1-based) and the standardized blocks.
pub fn decompose_132(pi: &Permutation) -> Result<(usize, Permutation, Permutation)> {
    let n = pi.len();
    if n == 0 {
        return Err(usage("decompose_132 needs n >= 1"));
    }
    let e = pi.entries();
    let pos = e.iter().position(|&v| v as usize == n).expect("permutation contains its maximum");
    let left = &e[..pos];
    let right = &e[pos + 1..];
    let min_left = left.iter().min().copied().unwrap_or(u32::MAX);
    let max_right = right.iter().max().copied().unwrap_or(0);
    if min_left < max_right {
        return Err(usage(format!("{pi} is not 132-avoiding: an entry left of n is below one to its right")));
    }
    let shift = right.len() as u32;
    let pi1 = Permutation::from_vec_unchecked(left.iter().map(|&v| v - shift).collect());
    let pi2 = Permutation::from_vec_unchecked(right.to_vec());
    Ok((pos + 1, pi1, pi2))
}

/// Inverse of [`decompose_132`]: `pi1` shifted above `pi2`, with the maximum between.
pub fn compose_132(pi1: &Permutation, pi2: &Permutation) -> Permutation {
    let shift = pi2.len() as u32;
    let n = (pi1.len() + pi2.len() + 1) as u32;
    let mut e: Vec<u32> = pi1.entries().iter().map(|&v| v + shift).collect();
    e.push(n);
    e.extend_from_slice(pi2.entries());
    Permutation::from_vec_unchecked(e)
}
