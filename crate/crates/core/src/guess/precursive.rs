use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::linalg::{join_signed, nullspace, render_univariate};
use super::Sequence;
use crate::arith::Rational;
use crate::error::{usage, Result};

/// `sum_{i=0}^{order} q_i(n) a(n+i) = 0`, with `q_i` given low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PRecurrence {
    pub order: usize,
    pub degree: usize,
    #[serde(with = "coeff_serde")]
    pub coeffs: Vec<Vec<BigInt>>,
    /// Human-readable form.
    #[serde(default)]
    pub rendered: String,
}

mod coeff_serde {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|q| q.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|q| q.iter().map(|x| x.parse().map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

impl PRecurrence {
    /// Normalizes (primitive, leading coefficient of `q_order` positive) and renders.
    pub fn new(coeffs: Vec<Vec<BigInt>>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|q| q.iter().all(|x| x.is_zero())) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(usage("a recurrence needs a nonzero coefficient"));
        }
        let g = coeffs.iter().flatten().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
        let lead_negative = coeffs.last().unwrap().iter().rev().find(|x| !x.is_zero()).unwrap().is_negative();
        let g = if lead_negative { -g } else { g };
        for x in coeffs.iter_mut().flatten() {
            *x = &*x / &g;
        }
        for q in coeffs.iter_mut() {
            while q.last().is_some_and(|x| x.is_zero()) {
                q.pop();
            }
        }
        let degree = coeffs.iter().map(|q| q.len().saturating_sub(1)).max().unwrap_or(0);
        let order = coeffs.len() - 1;
        let mut r = PRecurrence { order, degree, coeffs, rendered: String::new() };
        r.rendered = r.to_string();
        Ok(r)
    }

    /// `q_i(n)`.
    pub fn eval_coeff(&self, i: usize, n: i64) -> BigInt {
        let nb = BigInt::from(n);
        self.coeffs[i].iter().rev().fold(BigInt::zero(), |acc, c| acc * &nb + c)
    }
}

impl fmt::Display for PRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, q) in self.coeffs.iter().enumerate().rev() {
            if q.iter().all(|x| x.is_zero()) {
                continue;
            }
            let shift = if i == 0 { "a(n)".to_string() } else { format!("a(n+{i})") };
            let nz: Vec<&BigInt> = q.iter().filter(|x| !x.is_zero()).collect();
            if nz.len() == 1 && q.len() == 1 {
                let c = nz[0];
                let body = if c.abs() == BigInt::from(1) { shift } else { format!("{}*{shift}", c.abs()) };
                parts.push((c.is_negative(), body));
            } else {
                parts.push((false, format!("({})*{shift}", render_univariate(q, "n"))));
            }
        }
        write!(f, "{} = 0", join_signed(parts))
    }
}

/// Outcome of checking a recurrence against a sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub ok: bool,
    /// Smallest `n` where the relation fails.
    pub first_failure: Option<i64>,
}

/// Checks the relation at every `n` in `range` (sequence indices, including the offset).
pub fn verify_recurrence(rec: &PRecurrence, seq: &Sequence, range: std::ops::Range<i64>) -> Result<Verification> {
    for n in range {
        let lo = n - seq.offset;
        let hi = lo + rec.order as i64;
        if lo < 0 || hi >= seq.values.len() as i64 {
            return Err(usage(format!("n = {n} needs terms outside the sequence")));
        }
        let total: Rational = (0..=rec.order)
            .map(|i| &Rational::from_integer(rec.eval_coeff(i, n)) * &seq.values[(lo + i as i64) as usize])
            .sum();
        if !total.is_zero() {
            return Ok(Verification { ok: false, first_failure: Some(n) });
        }
    }
    Ok(Verification { ok: true, first_failure: None })
}

/// Fewest terms `guess_p_recursive` accepts: `N + 1` values with
/// `N >= (order+1)(degree+1) + order + holdout`.
pub fn p_recursive_min_last_index(max_order: usize, max_degree: usize, holdout: usize) -> usize {
    (max_order + 1) * (max_degree + 1) + max_order + holdout
}

/// Search pairs `(order, degree)` in graded-then-lexicographic order.
pub(crate) fn graded_pairs(max_a: usize, min_a: usize, max_b: usize) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> =
        (min_a..=max_a).flat_map(|a| (0..=max_b).map(move |b| (a, b))).collect();
    v.sort_by_key(|&(a, b)| (a + b, a));
    v
}

/// Smallest P-recurrence fitting all but the last `holdout` terms and
/// satisfied exactly by the held-out ones; `None` if none within bounds.
pub fn guess_p_recursive(seq: &Sequence, max_order: usize, max_degree: usize, holdout: usize) -> Result<Option<PRecurrence>> {
    let need = p_recursive_min_last_index(max_order, max_degree, holdout);
    let n_last = seq.values.len().saturating_sub(1);
    if seq.values.is_empty() || n_last < need {
        return Err(usage(format!(
            "order {max_order}, degree {max_degree}, holdout {holdout} need terms a_0..a_N with N >= {need}; got N = {}",
            seq.values.len() as i64 - 1
        )));
    }
    let train_last = n_last - holdout;
    for (order, degree) in graded_pairs(max_order, 1, max_degree) {
        let unknowns = (order + 1) * (degree + 1);
        let train_eqs = train_last + 1 - order;
        if train_eqs <= unknowns {
            continue;
        }
        let rows: Vec<Vec<BigInt>> = (0..train_eqs)
            .map(|j| {
                let n = Rational::from(seq.offset + j as i64);
                let npow: Vec<Rational> = (0..=degree).map(|d| n.pow(d as u32)).collect();
                let row: Vec<Rational> = (0..=order)
                    .flat_map(|i| {
                        let a = &seq.values[j + i];
                        npow.iter().map(move |p| a * p)
                    })
                    .collect();
                super::linalg::integer_row(&row)
            })
            .collect();
        let mut candidates = nullspace(&rows, unknowns);
        candidates.sort_by_key(|v| v.iter().filter(|x| !x.is_zero()).count());
        for v in candidates {
            let coeffs: Vec<Vec<BigInt>> = v.chunks(degree + 1).map(|c| c.to_vec()).collect();
            if coeffs.last().is_some_and(|q| q.iter().all(|x| x.is_zero())) {
                continue;
            }
            let rec = PRecurrence::new(coeffs)?;
            let start = seq.offset + train_eqs as i64;
            let end = seq.offset + (n_last + 1 - rec.order) as i64;
            if verify_recurrence(&rec, seq, start..end)?.ok && rec.order == order {
                return Ok(Some(rec));
            }
        }
    }
    Ok(None)
}
