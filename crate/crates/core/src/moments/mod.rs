//! Factorial, raw, central and standardized moments from weight enumerators.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, MultiPoly, Rational};
use crate::error::{usage, Error, Result};
use crate::funceq::EnumeratorSequence;

/// Normal reference for the `r`-th standardized moment: `(r-1)!!` for even `r`.
pub fn normal_moment(r: u32) -> BigInt {
    if r % 2 == 1 {
        return BigInt::zero();
    }
    (1..r).step_by(2).map(BigInt::from).product()
}

/// Stirling numbers of the second kind, `S(r, j)` for `r, j <= r_max`.
pub fn stirling2_table(r_max: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); r_max + 1]; r_max + 1];
    s[0][0] = BigInt::one();
    for r in 1..=r_max {
        for j in 1..=r {
            s[r][j] = &s[r - 1][j - 1] + BigInt::from(j) * &s[r - 1][j];
        }
    }
    s
}

/// `f^(r)_n = r! [(t-1)^r] P_n(t)` for `r <= r_max`, per `n`.
pub fn factorial_from_full(polys: &[MultiPoly], r_max: u32) -> Result<Vec<Vec<Rational>>> {
    polys
        .iter()
        .map(|p| {
            let coeffs = p.univariate_coeffs()?;
            Ok((0..=r_max)
                .map(|r| {
                    coeffs
                        .iter()
                        .enumerate()
                        .filter(|(e, c)| *e as u32 >= r && !c.is_zero())
                        .map(|(e, c)| c * &Rational::from_integer(falling(e as u64, r)))
                        .sum()
                })
                .collect())
        })
        .collect()
}

fn falling(e: u64, r: u32) -> BigInt {
    (0..r as u64).map(|j| BigInt::from(e - j)).product()
}

fn factorial(r: u32) -> BigInt {
    (1..=r as u64).map(BigInt::from).product()
}

/// `m^(r) = (1/c_n) sum_j S(r,j) f^(j)`, where `c_n = f^(0)`.
pub fn raw_from_factorial(f: &[Rational]) -> Result<Vec<Rational>> {
    let Some(mass) = f.first().filter(|c| !c.is_zero()) else {
        return Err(usage("empty distribution: f^(0) must be positive"));
    };
    let inv = mass.recip();
    let s = stirling2_table(f.len().saturating_sub(1));
    Ok((0..f.len())
        .map(|r| {
            let total: Rational =
                (0..=r).map(|j| &Rational::from_integer(s[r][j].clone()) * &f[j]).sum();
            &total * &inv
        })
        .collect())
}

/// `M^(r) = sum_j C(r,j) (-a)^{r-j} m^(j)` with `a = m^(1)`.
pub fn central_from_raw(m: &[Rational]) -> Vec<Rational> {
    let a = m.get(1).cloned().unwrap_or_else(Rational::zero);
    let neg_a = -a;
    (0..m.len())
        .map(|r| {
            (0..=r)
                .map(|j| {
                    let c = Rational::from_integer(binomial(r as u64, j as u64));
                    &(&c * &neg_a.pow((r - j) as u32)) * &m[j]
                })
                .sum()
        })
        .collect()
}

/// One standardized moment `alpha_r = M_r / M_2^{r/2}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardized {
    pub r: u32,
    /// `sign(M_r) * M_r^2 / M_2^r`, exact.
    pub signed_square: Rational,
    /// `M_r / M_2^{r/2}` when `r` is even.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Rational>,
    pub value: f64,
    /// Moment of the standard normal for the same `r`.
    pub normal: i64,
}

/// Standardized moments for `r = 0..central.len()`; zero variance is an error.
pub fn standardized(central: &[Rational], n: usize) -> Result<Vec<Standardized>> {
    let var = central.get(2).ok_or_else(|| usage("standardized moments need r >= 2"))?;
    if !var.is_positive() {
        return Err(Error::Degenerate { n });
    }
    Ok(central
        .iter()
        .enumerate()
        .map(|(r, mr)| {
            let r = r as u32;
            let sq = &mr.pow(2) / &var.pow(r);
            let signed_square = if mr.is_negative() { -sq.clone() } else { sq.clone() };
            let exact = r.is_multiple_of(2).then(|| mr / &var.pow(r / 2));
            let value = match &exact {
                Some(e) => e.to_f64(),
                None => {
                    let v = sq.to_f64().sqrt();
                    if mr.is_negative() {
                        -v
                    } else {
                        v
                    }
                }
            };
            let normal = normal_moment(r).try_into().unwrap_or(i64::MAX);
            Standardized { r, signed_square, exact, value, normal }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub n: usize,
    #[serde(with = "crate::serde_util::big")]
    pub catalan: BigInt,
    pub factorial: Vec<Rational>,
    pub raw: Vec<Rational>,
    pub central: Vec<Rational>,
    /// Empty when the distribution at this `n` is degenerate.
    pub standardized: Vec<Standardized>,
    pub degenerate: bool,
}

impl MomentRow {
    pub fn mean(&self) -> Option<&Rational> {
        self.raw.get(1)
    }

    pub fn variance(&self) -> Option<&Rational> {
        self.central.get(2)
    }

    pub fn alpha(&self, r: u32) -> Option<&Standardized> {
        self.standardized.get(r as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub statistic: String,
    pub max_r: u32,
    pub rows: Vec<MomentRow>,
}

impl MomentTable {
    /// Builds every moment family from factorial-moment sums `f[n][r]`.
    pub fn from_factorial(statistic: impl Into<String>, f: Vec<Vec<Rational>>) -> Result<MomentTable> {
        let max_r = f.first().map(|r| r.len() as u32).unwrap_or(1).saturating_sub(1);
        let rows = f
            .into_iter()
            .enumerate()
            .map(|(n, factorial)| {
                let catalan = factorial[0]
                    .to_integer()
                    .ok_or_else(|| crate::error::internal(format!("non-integer mass at n = {n}")))?;
                let raw = raw_from_factorial(&factorial)?;
                let central = central_from_raw(&raw);
                let (standardized, degenerate) = if max_r < 2 {
                    (Vec::new(), false)
                } else {
                    match standardized(&central, n) {
                        Ok(s) => (s, false),
                        Err(Error::Degenerate { .. }) => (Vec::new(), true),
                        Err(e) => return Err(e),
                    }
                };
                Ok(MomentRow { n, catalan, factorial, raw, central, standardized, degenerate })
            })
            .collect::<Result<_>>()?;
        Ok(MomentTable { statistic: statistic.into(), max_r, rows })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("moment table serializes")
    }

    /// CSV header for [`MomentTable::write_csv`].
    pub fn csv_header(&self) -> Vec<String> {
        let mut h = vec!["n".to_string(), "c_n".to_string()];
        for prefix in ["f", "m", "M", "alpha_sq"] {
            h.extend((0..=self.max_r).map(|r| format!("{prefix}{r}")));
        }
        h.extend((0..=self.max_r).map(|r| format!("alpha{r}")));
        h
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| crate::error::internal(format!("csv: {e}"));
        w.write_record(self.csv_header()).map_err(io)?;
        for row in &self.rows {
            let mut rec = vec![row.n.to_string(), row.catalan.to_string()];
            for col in [&row.factorial, &row.raw, &row.central] {
                rec.extend(col.iter().map(|x| x.to_exact_string()));
            }
            let blanks = || (0..=self.max_r).map(|_| String::new());
            if row.standardized.is_empty() {
                rec.extend(blanks());
                rec.extend(blanks());
            } else {
                rec.extend(row.standardized.iter().map(|s| s.signed_square.to_exact_string()));
                rec.extend(row.standardized.iter().map(|s| format_float(s.value)));
            }
            w.write_record(&rec).map_err(io)?;
        }
        w.flush().map_err(|e| crate::error::internal(format!("csv: {e}")))?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// Float rendering with 15 significant digits.
pub fn format_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.14e}");
    let v: f64 = s.parse().unwrap_or(x);
    v.to_string()
}

/// Moments of the first variable from a full-mode sequence, other variables set to 1.
pub fn moments_from_full(seq: &EnumeratorSequence, r_max: u32) -> Result<MomentTable> {
    let m = seq.marginal()?;
    let polys = m.full().ok_or_else(|| usage("expected a full-mode sequence"))?;
    MomentTable::from_factorial(seq.spec_name.clone(), factorial_from_full(polys, r_max)?)
}

/// Moments of the first variable from a truncated sequence; catalytic deviations are dropped.
pub fn moments_from_truncated(seq: &EnumeratorSequence, r_max: u32) -> Result<MomentTable> {
    let m = seq.marginal()?;
    let series = m.truncated().ok_or_else(|| usage("expected a truncated sequence"))?;
    if let Some(s) = series.first() {
        if s.cap() < r_max {
            return Err(usage(format!("truncation cap {} is below the requested order {r_max}", s.cap())));
        }
    }
    let f = series
        .iter()
        .map(|s| {
            (0..=r_max)
                .map(|r| &s.coeff(&[r]) * &Rational::from_integer(factorial(r)))
                .collect()
        })
        .collect();
    MomentTable::from_factorial(seq.spec_name.clone(), f)
}

#[cfg(test)]
mod tests;
