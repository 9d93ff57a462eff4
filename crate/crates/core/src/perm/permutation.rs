use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{usage, Error, Result};

/// A permutation of `{1..n}` in one-line notation; the empty permutation is allowed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation(Vec<u32>);

/// Patterns are permutations; the alias names the role.
pub type Pattern = Permutation;

impl Permutation {
    /// Checks that `entries` is a bijection onto `{1..len}`.
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let n = entries.len();
        let mut seen = vec![false; n + 1];
        for &e in &entries {
            if e == 0 || e as usize > n || seen[e as usize] {
                return Err(usage(format!("{entries:?} is not a permutation of 1..{n}")));
            }
            seen[e as usize] = true;
        }
        Ok(Permutation(entries))
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Permutation(entries)
    }

    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Permutation(inv)
    }

    /// Digits without separators, e.g. `213`; only meaningful for lengths up to 9.
    pub fn compact(&self) -> String {
        if self.0.is_empty() {
            return "e".to_string();
        }
        if self.0.len() <= 9 {
            self.0.iter().map(|d| char::from(b'0' + *d as u8)).collect()
        } else {
            self.to_string()
        }
    }

    /// All permutations of length `n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n + 1];
        fn rec(n: usize, cur: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation(cur.clone()));
                return;
            }
            for v in 1..=n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v as u32);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }

    pub fn contains(&self, pattern: &Pattern) -> bool {
        count_occurrences_bounded(pattern, self, 1) > 0
    }

    pub fn avoids(&self, pattern: &Pattern) -> bool {
        !self.contains(pattern)
    }
}

/// Replaces the i-th smallest entry by i.
pub fn standardize<T: Ord>(s: &[T]) -> Result<Permutation> {
    let mut idx: Vec<usize> = (0..s.len()).collect();
    idx.sort_by(|&a, &b| s[a].cmp(&s[b]));
    if idx.windows(2).any(|w| s[w[0]] == s[w[1]]) {
        return Err(usage("standardize: entries are not distinct"));
    }
    let mut out = vec![0u32; s.len()];
    for (rank, &i) in idx.iter().enumerate() {
        out[i] = rank as u32 + 1;
    }
    Ok(Permutation(out))
}

/// Standardization of distinct entries; quadratic, for short subsequences.
pub(crate) fn standardize_small(s: &[u32]) -> Permutation {
    Permutation(
        s.iter()
            .map(|&x| s.iter().filter(|&&y| y < x).count() as u32 + 1)
            .collect(),
    )
}

/// Number of index subsets of `pi` whose subsequence is order-isomorphic to `p`.
pub fn count_occurrences(p: &Pattern, pi: &Permutation) -> u64 {
    count_occurrences_bounded(p, pi, u64::MAX)
}

// Depth-first over increasing position tuples; a partial choice is pruned
// as soon as its relative order disagrees with the pattern prefix.
fn count_occurrences_bounded(p: &Pattern, pi: &Permutation, stop_at: u64) -> u64 {
    let k = p.len();
    let n = pi.len();
    if k == 0 {
        return 1;
    }
    if k > n {
        return 0;
    }
    let mut chosen: Vec<u32> = Vec::with_capacity(k);
    let mut count = 0u64;
    fn rec(p: &[u32], pi: &[u32], start: usize, chosen: &mut Vec<u32>, count: &mut u64, stop_at: u64) {
        let d = chosen.len();
        if d == p.len() {
            *count += 1;
            return;
        }
        let remaining = p.len() - d;
        for pos in start..=pi.len() - remaining {
            let v = pi[pos];
            let ok = chosen.iter().zip(&p[..d]).all(|(&c, &pc)| (c < v) == (pc < p[d]));
            if ok {
                chosen.push(v);
                rec(p, pi, pos + 1, chosen, count, stop_at);
                chosen.pop();
                if *count >= stop_at {
                    return;
                }
            }
        }
    }
    rec(&p.0, &pi.0, 0, &mut chosen, &mut count, stop_at);
    count
}

/// Standardizes every k-subset of positions of `pi` and tallies the patterns.
pub fn classify_all_subsets(pi: &Permutation, k: usize) -> Result<BTreeMap<Pattern, u64>> {
    let n = pi.len();
    if k > n {
        return Err(usage(format!("subset size {k} exceeds permutation length {n}")));
    }
    let mut out = BTreeMap::new();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf = vec![0u32; k];
    loop {
        for (b, &i) in buf.iter_mut().zip(&idx) {
            *b = pi.0[i];
        }
        *out.entry(standardize_small(&buf)).or_insert(0) += 1;
        // next combination in lexicographic order
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return Ok(out);
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts one-line notation (`2 1 3`, `2,1,3`) or compact digits (`213`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "ε" {
            return Ok(Permutation::empty());
        }
        let entries: Vec<u32> = if s.contains(|c: char| c.is_whitespace() || c == ',') {
            s.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad permutation entry {t:?}"))))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::Parse(format!("bad permutation {s:?}"))))
                .collect::<Result<_>>()?
        };
        Permutation::new(entries)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn standardize_examples() {
        assert_eq!(standardize(&[5, 9, 7]).unwrap(), p("132"));
        assert_eq!(standardize::<u32>(&[]).unwrap(), Permutation::empty());
        assert_eq!(standardize(&[3, 2, 1]).unwrap(), p("321"));
        assert!(standardize(&[1, 4, 1]).is_err());
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(count_occurrences(&p("21"), &p("321")), 3);
        assert_eq!(count_occurrences(&p("213"), &p("213")), 1);
        assert_eq!(count_occurrences(&p("132"), &p("231")), 0);
        assert_eq!(count_occurrences(&Permutation::empty(), &p("231")), 1);
        assert_eq!(count_occurrences(&p("1234"), &p("12")), 0);
    }

    #[test]
    fn subset_classification() {
        let m = classify_all_subsets(&p("321"), 2).unwrap();
        assert_eq!(m.into_iter().collect::<Vec<_>>(), vec![(p("21"), 3)]);
        let m = classify_all_subsets(&p("213"), 3).unwrap();
        assert_eq!(m.into_iter().collect::<Vec<_>>(), vec![(p("213"), 1)]);
        let m = classify_all_subsets(&p("2413"), 0).unwrap();
        assert_eq!(m.into_iter().collect::<Vec<_>>(), vec![(Permutation::empty(), 1)]);
        assert!(classify_all_subsets(&p("12"), 3).is_err());
    }

    #[test]
    fn parsing_forms() {
        assert_eq!(p("2 1 3"), p("213"));
        assert_eq!(p("10 1 2 3 4 5 6 7 8 9").len(), 10);
        assert!("113".parse::<Permutation>().is_err());
        assert!("2 x".parse::<Permutation>().is_err());
        assert_eq!(p("e"), Permutation::empty());
        assert_eq!(p("2413").inverse(), p("3142"));
    }

    #[test]
    fn all_permutations_lexicographic() {
        let all = Permutation::all(3);
        let names: Vec<String> = all.iter().map(|x| x.compact()).collect();
        assert_eq!(names, ["123", "132", "213", "231", "312", "321"]);
        assert_eq!(Permutation::all(0), vec![Permutation::empty()]);
    }
}
