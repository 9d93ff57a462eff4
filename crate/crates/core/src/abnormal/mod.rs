//! Limits of standardized moments and abnormality verdicts.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{usage, Error, Result};
use crate::funceq::{builtin_spec, eval_truncated, FuncRecSpec};
use crate::guess::{guess_p_recursive, verify_recurrence, PRecurrence, Sequence};
use crate::moments::{normal_moment, MomentTable};
use crate::perm::{Family, Pattern};
use crate::TOOL_VERSION;

pub const MIN_N: usize = 50;
pub const MIN_R: u32 = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tau_skew: f64,
    pub tau_kurt: f64,
    pub epsilon: f64,
    /// Correction model `a(n) = beta + sum_j c_j n^(-p_j)`.
    pub correction_exponents: Vec<f64>,
    /// Extrapolation uses `n = N - step*(points-1), ..., N - step, N`.
    pub window_step: usize,
    pub window_points: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tau_skew: 0.02,
            tau_kurt: 0.02,
            epsilon: 1e-2,
            correction_exponents: vec![0.5, 1.0],
            window_step: 10,
            window_points: 7,
        }
    }
}

impl Tolerances {
    /// The plain `O(1/n)` model on the checkpoints alone.
    pub fn single_inverse_power() -> Self {
        Tolerances { correction_exponents: vec![1.0], window_step: 0, window_points: 0, ..Tolerances::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.correction_exponents.iter().any(|p| p.is_nan() || *p <= 0.0) {
            return Err(usage("correction exponents must be positive"));
        }
        if self.window_points > 0 && self.window_step == 0 {
            return Err(usage("window step must be positive"));
        }
        Ok(())
    }
}

/// Solves a small dense system by Gaussian elimination with partial pivoting.
fn solve_small(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c] == 0.0 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for j in c..n {
                a[i][j] -= f * a[c][j];
            }
            b[i] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

/// Generalized Richardson extrapolation over `(n, value)` samples.
///
/// Each accelerated value fits `beta + sum_j c_j n^(-p_j)` exactly through
/// `exponents.len() + 1` consecutive samples. Returns the last accelerated
/// value and the largest jump between the last three accelerated values.
pub fn limit_estimate(samples: &[(f64, f64)], exponents: &[f64]) -> Result<(f64, f64)> {
    let need = exponents.len() + 3;
    if samples.len() < need.max(4) {
        return Err(usage(format!(
            "limit estimation with {} correction terms needs at least {} samples, got {}",
            exponents.len(),
            need.max(4),
            samples.len()
        )));
    }
    let k = exponents.len() + 1;
    let acc: Vec<f64> = samples
        .windows(k)
        .map(|w| {
            let a: Vec<Vec<f64>> =
                w.iter().map(|&(n, _)| std::iter::once(1.0).chain(exponents.iter().map(|p| n.powf(-p))).collect()).collect();
            let b: Vec<f64> = w.iter().map(|&(_, v)| v).collect();
            solve_small(a, b).map(|x| x[0]).unwrap_or(f64::NAN)
        })
        .collect();
    let tail = &acc[acc.len() - 3..];
    let metric = tail.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    Ok((*acc.last().unwrap(), metric))
}

/// Sample points `{N/2, 3N/4, N-10, N}`.
pub fn checkpoints(n: usize) -> Vec<usize> {
    vec![n / 2, 3 * n / 4, n - 10, n]
}

/// Points used for extrapolation: the tail window, or the checkpoints if the window is empty.
/// The step shrinks so the window stays within `[N/2, N]`.
pub fn extrapolation_points(n: usize, tol: &Tolerances) -> Vec<usize> {
    if tol.window_points < 2 {
        return checkpoints(n);
    }
    let step = tol.window_step.min((n / 2) / (tol.window_points - 1)).max(1);
    (0..tol.window_points).rev().map(|j| n - j * step).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub n: usize,
    pub alpha: f64,
    /// `sign(M_r) M_r^2 / M_2^r`, exact.
    pub signed_square: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentLimit {
    pub r: u32,
    /// Values at the checkpoints.
    pub samples: Vec<Sample>,
    /// Values the estimate was extrapolated from.
    pub window: Vec<(usize, f64)>,
    pub estimate: f64,
    pub metric: f64,
    #[serde(with = "crate::serde_util::big")]
    pub normal: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Abnormal,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub r: u32,
    pub recurrence: PRecurrence,
    /// Last `n` through which the recurrence was checked.
    pub verified_through: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub statistic: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<FuncRecSpec>,
    pub n_max: usize,
    pub r_max: u32,
    pub tolerances: Tolerances,
    pub checkpoints: Vec<usize>,
    pub evidence: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbnormalityReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<Pattern>,
    pub n_range: (usize, usize),
    pub moments: Vec<MomentLimit>,
    pub verdict: Verdict,
    /// Which test produced the verdict, or why none did.
    pub reason: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<Certificate>,
    pub provenance: Provenance,
}

impl AbnormalityReport {
    pub fn limit(&self, r: u32) -> Option<&MomentLimit> {
        self.moments.iter().find(|m| m.r == r)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// The verdict rule, applied to already computed limits.
pub fn verdict(moments: &[MomentLimit], tol: &Tolerances) -> (Verdict, String) {
    let mut notes = Vec::new();
    for (r, tau) in [(3, tol.tau_skew), (4, tol.tau_kurt)] {
        let Some(m) = moments.iter().find(|m| m.r == r) else { continue };
        let dev = (m.estimate - m.normal.to_string().parse::<f64>().unwrap_or(0.0)).abs();
        if dev > tau && m.metric < tol.epsilon {
            return (
                Verdict::Abnormal,
                format!(
                    "beta{r} estimate {:.6} differs from the normal value {} by {dev:.6} > {tau}, convergence metric {:.2e} < {}",
                    m.estimate, m.normal, m.metric, tol.epsilon
                ),
            );
        }
        if dev > tau {
            notes.push(format!("beta{r} deviates by {dev:.6} but the metric {:.2e} is not below {}", m.metric, tol.epsilon));
        } else {
            notes.push(format!("beta{r} is within {tau} of the normal value {}", m.normal));
        }
    }
    (Verdict::Inconclusive, notes.join("; "))
}

fn sample(table: &MomentTable, n: usize, r: u32) -> Result<Sample> {
    let row = table.rows.get(n).ok_or_else(|| usage(format!("moment table stops before n = {n}")))?;
    if row.degenerate {
        return Err(Error::Degenerate { n });
    }
    let s = row.alpha(r).ok_or_else(|| usage(format!("moment table lacks r = {r}")))?;
    Ok(Sample { n, alpha: s.value, signed_square: s.signed_square.clone() })
}

fn limits(table: &MomentTable, n_max: usize, r_max: u32, tol: &Tolerances) -> Result<(Vec<MomentLimit>, Vec<usize>)> {
    tol.validate()?;
    let cps = checkpoints(n_max);
    let pts = extrapolation_points(n_max, tol);
    let mut out = Vec::new();
    for r in 3..=r_max {
        let samples = cps.iter().map(|&n| sample(table, n, r)).collect::<Result<Vec<_>>>()?;
        let window =
            pts.iter().map(|&n| sample(table, n, r).map(|s| (n, s.alpha))).collect::<Result<Vec<_>>>()?;
        let xy: Vec<(f64, f64)> = window.iter().map(|&(n, a)| (n as f64, a)).collect();
        let (estimate, metric) = limit_estimate(&xy, &tol.correction_exponents)?;
        out.push(MomentLimit { r, samples, window, estimate, metric, normal: normal_moment(r) });
    }
    Ok((out, cps))
}

fn check_range(n_max: usize, r_max: u32) -> Result<()> {
    if n_max < MIN_N {
        return Err(usage(format!("abnormality analysis needs N >= {MIN_N}")));
    }
    if r_max < MIN_R {
        return Err(usage(format!("abnormality analysis needs R >= {MIN_R}")));
    }
    Ok(())
}

/// Builds a report from any moment table (rows indexed by `n`).
pub fn analyze_table(
    table: &MomentTable,
    n_max: usize,
    r_max: u32,
    tol: &Tolerances,
    evidence: &str,
) -> Result<AbnormalityReport> {
    check_range(n_max, r_max)?;
    let (moments, cps) = limits(table, n_max, r_max, tol)?;
    let (verdict, reason) = verdict(&moments, tol);
    Ok(AbnormalityReport {
        family: None,
        pattern: None,
        n_range: (cps[0], n_max),
        moments,
        verdict,
        reason,
        certificates: Vec::new(),
        provenance: Provenance {
            tool_version: TOOL_VERSION.to_string(),
            statistic: table.statistic.clone(),
            spec: None,
            n_max,
            r_max,
            tolerances: tol.clone(),
            checkpoints: cps,
            evidence: evidence.to_string(),
        },
    })
}

const EVIDENCE: &str = "numerical extrapolation of exactly computed standardized moments; not a proof";

/// Runs the truncated pipeline for a catalog statistic and applies the verdict rule.
pub fn analyze(family: Family, pattern: &Pattern, n_max: usize, r_max: u32, tol: &Tolerances) -> Result<AbnormalityReport> {
    check_range(n_max, r_max)?;
    let spec = builtin_spec(family, pattern)?;
    let table = crate::moments::moments_from_truncated(&eval_truncated(&spec, n_max, r_max)?, r_max)?;
    let mut report = analyze_table(&table, n_max, r_max, tol, EVIDENCE)?;
    report.family = Some(family);
    report.pattern = Some(pattern.clone());
    report.provenance.spec = Some(spec);
    Ok(report)
}

/// Guesses a P-recurrence for each factorial-moment sequence `f^(r)`, `1 <= r <= R`,
/// from the first `fit_terms` values and checks it on the whole table.
pub fn certificates(table: &MomentTable, fit_terms: usize, max_order: usize, max_degree: usize) -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    for r in 1..=table.max_r {
        let all: Vec<Rational> = table.rows.iter().map(|row| row.factorial[r as usize].clone()).collect();
        let fit = Sequence::new(format!("f{r}"), 0, all[..fit_terms.min(all.len())].to_vec());
        let Ok(Some(rec)) = guess_p_recursive(&fit, max_order, max_degree, crate::guess::DEFAULT_HOLDOUT) else {
            continue;
        };
        let full = Sequence::new(format!("f{r}"), 0, all);
        let end = full.values.len() - rec.order;
        if verify_recurrence(&rec, &full, 0..end as i64)?.ok {
            out.push(Certificate { r, recurrence: rec, verified_through: full.values.len() - 1 });
        }
    }
    Ok(out)
}

/// Moment table of the binomial enumerators `(1+t)^n`, `n <= n_max`.
pub fn binomial_control_table(n_max: usize, r_max: u32) -> Result<MomentTable> {
    let f: Vec<Vec<Rational>> = (0..=n_max as u64)
        .map(|n| {
            (0..=r_max as u64)
                .map(|r| {
                    if r > n {
                        return Rational::from(0);
                    }
                    let fall: BigInt = (0..r).map(|j| BigInt::from(n - j)).product();
                    Rational::from_integer(fall * BigInt::from(2).pow((n - r) as u32))
                })
                .collect()
        })
        .collect();
    MomentTable::from_factorial("binomial (1+t)^n", f)
}

/// The synthetic normal control.
pub fn analyze_binomial_control(n_max: usize, r_max: u32, tol: &Tolerances) -> Result<AbnormalityReport> {
    let table = binomial_control_table(n_max, r_max)?;
    analyze_table(&table, n_max, r_max, tol, "synthetic control: binomial distribution, asymptotically normal")
}

#[cfg(test)]
mod tests;
