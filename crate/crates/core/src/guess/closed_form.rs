use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::linalg::{integer_row, nullspace};
use super::Sequence;
use crate::arith::{catalan_table, Rational};
use crate::error::{usage, Result};

/// One basis sequence: `n^power * base(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    FourPow,
    CatalanPrev,
    Power,
    Catalan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisTerm {
    pub kind: BasisKind,
    pub power: u32,
    pub coeff: Rational,
}

impl BasisTerm {
    pub fn label(&self) -> String {
        let np = match self.power {
            0 => String::new(),
            1 => "n*".to_string(),
            p => format!("n^{p}*"),
        };
        match self.kind {
            BasisKind::FourPow => format!("{np}4^n"),
            BasisKind::CatalanPrev => format!("{np}c(n-1)"),
            BasisKind::Catalan => format!("{np}c(n)"),
            BasisKind::Power if self.power == 0 => "1".to_string(),
            BasisKind::Power => np.trim_end_matches('*').to_string(),
        }
    }
}

/// `a(n) = sum coeff * basis(n)`, nonzero terms only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormFit {
    pub degree: u32,
    pub terms: Vec<BasisTerm>,
    pub rendered: String,
}

fn basis(d: u32) -> Vec<(BasisKind, u32)> {
    let mut b = Vec::new();
    for kind in [BasisKind::FourPow, BasisKind::CatalanPrev, BasisKind::Power] {
        b.extend((0..=d).map(|i| (kind, i)));
    }
    b.push((BasisKind::Catalan, 0));
    b
}

fn basis_value(kind: BasisKind, power: u32, n: i64, cat: &[BigInt]) -> Rational {
    let np = Rational::from(n).pow(power);
    let base = match kind {
        BasisKind::FourPow => Rational::from_integer(BigInt::from(4).pow(n as u32)),
        BasisKind::CatalanPrev => Rational::from_integer(cat[n as usize - 1].clone()),
        BasisKind::Catalan => Rational::from_integer(cat[n as usize].clone()),
        BasisKind::Power => Rational::from(1),
    };
    &np * &base
}

impl ClosedFormFit {
    pub fn eval(&self, n: i64) -> Rational {
        let cat = catalan_table(n.max(0) as usize);
        self.terms.iter().map(|t| &t.coeff * &basis_value(t.kind, t.power, n, &cat)).sum()
    }
}

/// Exact fit over `{n^i 4^n, n^i c(n-1), n^i : i <= d} + {c(n)}` on all but
/// the last `holdout` terms, checked on those. Needs `offset >= 1`.
pub fn fit_closed_form(seq: &Sequence, d: u32, holdout: usize) -> Result<Option<ClosedFormFit>> {
    if seq.offset < 1 {
        return Err(usage("closed-form fitting uses c(n-1) and needs the sequence to start at n >= 1"));
    }
    let b = basis(d);
    let need = b.len() + 1 + holdout;
    if seq.values.len() < need {
        return Err(usage(format!(
            "degree {d} with holdout {holdout} needs at least {need} terms; got {}",
            seq.values.len()
        )));
    }
    let last_n = seq.offset + seq.values.len() as i64 - 1;
    let cat = catalan_table(last_n as usize);
    let train = seq.values.len() - holdout;
    let rows: Vec<Vec<BigInt>> = (0..train)
        .map(|i| {
            let n = seq.offset + i as i64;
            let mut row: Vec<Rational> = b.iter().map(|&(k, p)| basis_value(k, p, n, &cat)).collect();
            row.push(-seq.values[i].clone());
            integer_row(&row)
        })
        .collect();
    let ns = nullspace(&rows, b.len() + 1);
    let ns: Vec<_> = ns.into_iter().filter(|v| !v[b.len()].is_zero()).collect();
    if ns.len() != 1 {
        return Ok(None);
    }
    let v = &ns[0];
    let scale = Rational::from_integer(v[b.len()].clone());
    let terms: Vec<BasisTerm> = b
        .iter()
        .zip(v)
        .filter(|(_, c)| !c.is_zero())
        .map(|(&(kind, power), c)| BasisTerm { kind, power, coeff: &Rational::from_integer(c.clone()) / &scale })
        .collect();
    let rendered = if terms.is_empty() {
        "0".to_string()
    } else {
        terms.iter().map(|t| format!("({})*{}", t.coeff, t.label())).collect::<Vec<_>>().join(" + ")
    };
    let fit = ClosedFormFit { degree: d, terms, rendered };
    let ok = (train..seq.values.len()).all(|i| fit.eval(seq.offset + i as i64) == seq.values[i]);
    Ok(ok.then_some(fit))
}
