//! The length-increasing map `U` on 123-avoiders behind the decomposition
//! `pi = pi1 U(pi2)`, and the two auxiliary statistics defined through it.
//!
//! The verbal description of `U` admits several readings (which entries are
//! circled, which slide). Each reading is a [`UReading`]; [`validate_readings`]
//! checks exhaustively which of them make the decomposition a bijection, and
//! [`u_map`] uses the one that passes.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::avoiders::enumerate_avoiders;
use super::permutation::{count_occurrences, Permutation};
use crate::error::{internal, usage, Result};

/// Which entries stay in place ("circled") while the others slide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Marked {
    RightToLeftMaxima,
    LeftToRightMaxima,
    LeftToRightMinima,
    RightToLeftMinima,
}

/// One candidate construction of `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UReading {
    pub marked: Marked,
    /// When true the unmarked entries slide; otherwise the marked ones do.
    pub slide_unmarked: bool,
}

impl UReading {
    /// The reading that passes validation: right-to-left maxima stay put, the
    /// remaining entries slide one free slot to the left.
    pub const VALIDATED: UReading = UReading { marked: Marked::RightToLeftMaxima, slide_unmarked: true };

    pub fn candidates() -> Vec<UReading> {
        let mut out = Vec::new();
        for marked in [
            Marked::RightToLeftMaxima,
            Marked::LeftToRightMaxima,
            Marked::LeftToRightMinima,
            Marked::RightToLeftMinima,
        ] {
            for slide_unmarked in [true, false] {
                out.push(UReading { marked, slide_unmarked });
            }
        }
        out
    }

    fn marks(&self, e: &[u32]) -> Vec<bool> {
        let n = e.len();
        (0..n)
            .map(|i| match self.marked {
                Marked::RightToLeftMaxima => e[i + 1..].iter().all(|&x| x < e[i]),
                Marked::LeftToRightMaxima => e[..i].iter().all(|&x| x < e[i]),
                Marked::LeftToRightMinima => e[..i].iter().all(|&x| x > e[i]),
                Marked::RightToLeftMinima => e[i + 1..].iter().all(|&x| x > e[i]),
            })
            .collect()
    }

    /// Applies this reading of `U` to any permutation (no avoidance check).
    ///
    /// An empty slot is opened before the first entry; the sliding entries,
    /// in order, each move into the nearest open slot to their left, which
    /// leaves one slot open; all values go up by one and `1` fills the slot.
    pub fn apply(&self, pi: &Permutation) -> Permutation {
        let e = pi.entries();
        let n = e.len();
        let marks = self.marks(e);
        let slides: Vec<usize> = (0..n).filter(|&i| marks[i] != self.slide_unmarked).collect();
        let mut out = vec![0u32; n + 1];
        for i in 0..n {
            if marks[i] == self.slide_unmarked {
                out[i + 1] = e[i] + 1;
            }
        }
        let mut hole = 0usize;
        for &i in &slides {
            out[hole] = e[i] + 1;
            hole = i + 1;
        }
        out[hole] = 1;
        Permutation::from_vec_unchecked(out)
    }
}

impl fmt::Display for UReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let marked = match self.marked {
            Marked::RightToLeftMaxima => "right-to-left maxima",
            Marked::LeftToRightMaxima => "left-to-right maxima",
            Marked::LeftToRightMinima => "left-to-right minima",
            Marked::RightToLeftMinima => "right-to-left minima",
        };
        if self.slide_unmarked {
            write!(f, "{marked} stay fixed; all other entries slide one open slot left")
        } else {
            write!(f, "{marked} slide one open slot left; all other entries stay fixed")
        }
    }
}

fn pat123() -> Permutation {
    Permutation::from_vec_unchecked(vec![1, 2, 3])
}

/// `U(pi)` under the validated reading; `pi` must avoid 123.
pub fn u_map(pi: &Permutation) -> Result<Permutation> {
    if pi.contains(&pat123()) {
        return Err(usage(format!("u_map: {pi} contains 123")));
    }
    Ok(UReading::VALIDATED.apply(pi))
}

/// `pi1` (shifted up by `|pi2| + 1`) followed by `U(pi2)`.
pub fn compose_123_with(reading: UReading, pi1: &Permutation, pi2: &Permutation) -> Permutation {
    let u = reading.apply(pi2);
    let shift = u.len() as u32;
    let mut e: Vec<u32> = pi1.entries().iter().map(|&v| v + shift).collect();
    e.extend_from_slice(u.entries());
    Permutation::from_vec_unchecked(e)
}

/// Outcome of checking one reading for `1 <= n <= max_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadingCheck {
    pub reading: UReading,
    pub description: String,
    pub bijective: bool,
    /// First `n` at which the image differs from `AV123(n)`, if any.
    pub first_failure: Option<usize>,
}

/// Checks whether `(k, pi1, pi2) -> pi1 U(pi2)` is a bijection from
/// `union_k AV123(n-k) x AV123(k-1)` onto `AV123(n)` for every `n <= max_n`.
pub fn check_reading(reading: UReading, max_n: usize) -> Result<ReadingCheck> {
    let mut avoiders = Vec::with_capacity(max_n + 1);
    for m in 0..=max_n {
        avoiders.push(enumerate_avoiders(&pat123(), m)?);
    }
    let mut first_failure = None;
    'outer: for n in 1..=max_n {
        let target: BTreeSet<&Permutation> = avoiders[n].iter().collect();
        let mut image = BTreeSet::new();
        let mut produced = 0usize;
        for k in 1..=n {
            for pi2 in &avoiders[k - 1] {
                for pi1 in &avoiders[n - k] {
                    let pi = compose_123_with(reading, pi1, pi2);
                    if !target.contains(&pi) {
                        first_failure = Some(n);
                        break 'outer;
                    }
                    image.insert(pi);
                    produced += 1;
                }
            }
        }
        if produced != image.len() || image.len() != target.len() {
            first_failure = Some(n);
            break;
        }
    }
    Ok(ReadingCheck { reading, description: reading.to_string(), bijective: first_failure.is_none(), first_failure })
}

/// Validates every candidate reading; fails if [`UReading::VALIDATED`] is not
/// the unique bijective one.
pub fn validate_readings(max_n: usize) -> Result<Vec<ReadingCheck>> {
    let checks: Vec<ReadingCheck> =
        UReading::candidates().into_iter().map(|r| check_reading(r, max_n)).collect::<Result<_>>()?;
    let passing: Vec<&ReadingCheck> = checks.iter().filter(|c| c.bijective).collect();
    match passing.as_slice() {
        [only] if only.reading == UReading::VALIDATED => Ok(checks),
        [] => Err(internal(format!("no reading of the U map is a bijection for n <= {max_n}: {checks:?}"))),
        _ => Err(internal(format!("U map readings are not uniquely determined for n <= {max_n}: {checks:?}"))),
    }
}

/// `(sigma1, sigma2)`: first and second differences of `a_213` under `U`.
pub fn sigma_stats(pi: &Permutation) -> Result<(i64, i64)> {
    let p213 = Permutation::from_vec_unchecked(vec![2, 1, 3]);
    let a = |x: &Permutation| count_occurrences(&p213, x) as i64;
    let u1 = u_map(pi)?;
    let u2 = u_map(&u1)?;
    let s1 = a(&u1) - a(pi);
    let s1_of_u = a(&u2) - a(&u1);
    Ok((s1, s1_of_u - s1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn u_of_small_permutations() {
        assert_eq!(u_map(&Permutation::empty()).unwrap(), p("1"));
        assert_eq!(u_map(&p("1")).unwrap(), p("12"));
        assert_eq!(u_map(&p("12")).unwrap(), p("213"));
        assert_eq!(u_map(&p("312")).unwrap(), p("2413"));
        assert!(u_map(&p("123")).is_err());
    }

    #[test]
    fn only_one_reading_is_bijective() {
        let checks = validate_readings(7).unwrap();
        assert_eq!(checks.iter().filter(|c| c.bijective).count(), 1);
    }

    #[test]
    fn u_is_injective_with_catalan_image() {
        for m in 0..=8 {
            let av = enumerate_avoiders(&pat123(), m).unwrap();
            let image: BTreeSet<Permutation> = av.iter().map(|x| u_map(x).unwrap()).collect();
            assert_eq!(image.len(), av.len());
            assert!(image.iter().all(|x| x.len() == m + 1 && x.avoids(&pat123())));
        }
    }

    #[test]
    fn sigma_of_one_point() {
        assert_eq!(sigma_stats(&p("1")).unwrap(), (0, 1));
        assert_eq!(sigma_stats(&Permutation::empty()).unwrap(), (0, 0));
    }
}
