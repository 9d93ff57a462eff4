use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::linalg::{integer_row, join_signed, nullspace};
use super::precursive::graded_pairs;
use crate::arith::Rational;
use crate::error::{usage, Result};

/// `Phi(z, y) = sum coeffs[i][j] z^j y^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicEquation {
    pub deg_y: usize,
    pub deg_z: usize,
    #[serde(with = "grid")]
    pub coeffs: Vec<Vec<BigInt>>,
    /// Order through which `Phi(z, F(z))` was checked to vanish.
    pub verified_order: usize,
    #[serde(default)]
    pub rendered: String,
    /// `y = ...` when the coefficient of `y` is a nonzero constant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solved: Option<String>,
}

mod grid {
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

impl AlgebraicEquation {
    /// Coefficients of `Phi(z, F(z))` through `z^order`.
    pub fn residual(&self, series: &[Rational], order: usize) -> Vec<Rational> {
        let powers = series_powers(series, self.deg_y, order);
        (0..=order)
            .map(|m| {
                let mut acc = Rational::zero();
                for (i, row) in self.coeffs.iter().enumerate() {
                    for (j, c) in row.iter().enumerate() {
                        if !c.is_zero() && j <= m {
                            acc += &(&Rational::from_integer(c.clone()) * &powers[i][m - j]);
                        }
                    }
                }
                acc
            })
            .collect()
    }

    fn from_vector(v: &[BigInt], deg_y: usize, deg_z: usize, verified_order: usize) -> Self {
        let coeffs: Vec<Vec<BigInt>> = v.chunks(deg_z + 1).map(|c| c.to_vec()).collect();
        let mut e = AlgebraicEquation { deg_y, deg_z, coeffs, verified_order, rendered: String::new(), solved: None };
        e.rendered = e.to_string();
        e.solved = e.solved_form();
        e
    }

    /// Renders `Phi = 0` solved for the linear `y` term, e.g. `y = 1 + z*y^2`.
    pub fn solved_form(&self) -> Option<String> {
        let lin = self.coeffs.get(1)?;
        let c = lin.first().filter(|c| !c.is_zero())?;
        if lin[1..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let c = Rational::from_integer(c.clone());
        let mut parts = Vec::new();
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if x.is_zero() || (i, j) == (1, 0) {
                    continue;
                }
                let v = &(-Rational::from_integer(x.clone())) / &c;
                let mut factors = Vec::new();
                match j {
                    0 => {}
                    1 => factors.push("z".to_string()),
                    _ => factors.push(format!("z^{j}")),
                }
                match i {
                    0 => {}
                    1 => factors.push("y".to_string()),
                    _ => factors.push(format!("y^{i}")),
                }
                let mag = v.abs();
                let body = if factors.is_empty() {
                    mag.to_string()
                } else if mag.is_one() {
                    factors.join("*")
                } else if mag.is_integer() {
                    format!("{mag}*{}", factors.join("*"))
                } else {
                    format!("({mag})*{}", factors.join("*"))
                };
                parts.push((v.is_negative(), body));
            }
        }
        Some(format!("y = {}", join_signed(parts)))
    }
}

impl fmt::Display for AlgebraicEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut factors = Vec::new();
                match j {
                    0 => {}
                    1 => factors.push("z".to_string()),
                    _ => factors.push(format!("z^{j}")),
                }
                match i {
                    0 => {}
                    1 => factors.push("y".to_string()),
                    _ => factors.push(format!("y^{i}")),
                }
                let mag = c.abs();
                let body = if factors.is_empty() {
                    mag.to_string()
                } else if mag.is_one() {
                    factors.join("*")
                } else {
                    format!("{mag}*{}", factors.join("*"))
                };
                parts.push((c.is_negative(), body));
            }
        }
        f.write_str(&join_signed(parts))
    }
}

/// `F^0 .. F^deg` truncated after `z^order`.
fn series_powers(series: &[Rational], deg: usize, order: usize) -> Vec<Vec<Rational>> {
    let mut one = vec![Rational::zero(); order + 1];
    one[0] = Rational::one();
    let mut out = vec![one];
    for _ in 0..deg {
        let prev = out.last().unwrap();
        let mut next = vec![Rational::zero(); order + 1];
        for (a, x) in prev.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in series.iter().enumerate().take(order + 1 - a) {
                if !y.is_zero() {
                    next[a + b] += &(x * y);
                }
            }
        }
        out.push(next);
    }
    out
}

/// Smallest `Phi` with `Phi(z, F) = 0` through `z^(N - holdout)` that also vanishes through `z^N`.
/// `series` holds the coefficients of `F` through `z^N`.
pub fn guess_algebraic(
    series: &[Rational],
    max_deg_y: usize,
    max_deg_z: usize,
    holdout: usize,
) -> Result<Option<AlgebraicEquation>> {
    let need = (max_deg_y + 1) * (max_deg_z + 1) + holdout;
    let n = series.len().saturating_sub(1);
    if series.is_empty() || n < need {
        return Err(usage(format!(
            "deg_y {max_deg_y}, deg_z {max_deg_z}, holdout {holdout} need coefficients through z^N with N >= {need}; got N = {}",
            series.len() as i64 - 1
        )));
    }
    let train = n - holdout;
    let powers = series_powers(series, max_deg_y, n);
    for (dy, dz) in graded_pairs(max_deg_y, 1, max_deg_z) {
        let unknowns = (dy + 1) * (dz + 1);
        let rows: Vec<Vec<BigInt>> = (0..=train)
            .map(|m| {
                let row: Vec<Rational> = (0..=dy)
                    .flat_map(|i| {
                        let p = &powers[i];
                        (0..=dz).map(move |j| if j <= m { p[m - j].clone() } else { Rational::zero() })
                    })
                    .collect();
                integer_row(&row)
            })
            .collect();
        let mut candidates = nullspace(&rows, unknowns);
        candidates.sort_by_key(|v| v.iter().filter(|x| !x.is_zero()).count());
        for v in candidates {
            if v[dy * (dz + 1)..].iter().all(|x| x.is_zero()) {
                continue;
            }
            let eq = AlgebraicEquation::from_vector(&v, dy, dz, n);
            if eq.residual(series, n).iter().all(|x| x.is_zero()) {
                return Ok(Some(eq));
            }
        }
    }
    Ok(None)
}
