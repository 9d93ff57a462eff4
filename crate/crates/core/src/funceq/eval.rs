use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spec::{Atom, FuncRecSpec, Image};
use crate::arith::{var_list, Monomial, MultiPoly, Rational, SeriesLayout, Substitution, TruncatedSeries, VarList};
use crate::error::{usage, Error, Result};

/// Default largest `n` accepted in full-polynomial mode.
pub const FULL_MODE_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Mode {
    Full,
    Truncated { cap: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Values {
    Full(Vec<MultiPoly>),
    Truncated(Vec<TruncatedSeries>),
}

/// `Q_0..=Q_N` of one recurrence, as polynomials or truncated series.
///
/// In truncated mode the series variables are deviations `d<var>` from the
/// all-ones point, so `Q_n(1 + d)` is stored up to total degree `cap`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnumeratorSequence {
    pub spec_name: String,
    /// Variables of the stored values (the spec's variables, or their deviations).
    pub variables: Vec<String>,
    pub mode: Mode,
    pub values: Values,
}

/// Deviation variable name for a spec variable.
pub fn deviation_name(var: &str) -> String {
    format!("d{var}")
}

impl EnumeratorSequence {
    pub fn len(&self) -> usize {
        match &self.values {
            Values::Full(v) => v.len(),
            Values::Truncated(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn full(&self) -> Option<&[MultiPoly]> {
        match &self.values {
            Values::Full(v) => Some(v),
            Values::Truncated(_) => None,
        }
    }

    pub fn truncated(&self) -> Option<&[TruncatedSeries]> {
        match &self.values {
            Values::Truncated(v) => Some(v),
            Values::Full(_) => None,
        }
    }

    /// `Q_n` at the all-ones point.
    pub fn masses(&self) -> Vec<Rational> {
        match &self.values {
            Values::Full(v) => v.iter().map(|p| p.eval_ones()).collect(),
            Values::Truncated(v) => v.iter().map(|s| s.constant_term().clone()).collect(),
        }
    }

    /// Sets the named variables to 1 and removes them.
    ///
    /// In truncated mode this keeps only terms with zero exponent in the
    /// corresponding deviation variables. Names may be given either as spec
    /// variables (`q`) or as deviations (`dq`).
    pub fn specialize(&self, names: &[&str]) -> Result<EnumeratorSequence> {
        match &self.values {
            Values::Full(v) => {
                let values = v.iter().map(|p| p.specialize_to_one(names)).collect::<Result<Vec<_>>>()?;
                let variables = values
                    .first()
                    .map(|p| p.variables().to_vec())
                    .unwrap_or_else(|| self.variables.iter().filter(|x| !names.contains(&x.as_str())).cloned().collect());
                Ok(EnumeratorSequence { spec_name: self.spec_name.clone(), variables, mode: self.mode, values: Values::Full(values) })
            }
            Values::Truncated(v) => {
                let devs: Vec<String> = names
                    .iter()
                    .map(|n| {
                        if self.variables.iter().any(|x| x == n) {
                            Ok(n.to_string())
                        } else if self.variables.contains(&deviation_name(n)) {
                            Ok(deviation_name(n))
                        } else {
                            Err(usage(format!("unknown variable {n:?}")))
                        }
                    })
                    .collect::<Result<_>>()?;
                let devs: Vec<&str> = devs.iter().map(|s| s.as_str()).collect();
                let values = v.iter().map(|s| s.drop_variables(&devs)).collect::<Result<Vec<_>>>()?;
                let variables = self.variables.iter().filter(|x| !devs.contains(&x.as_str())).cloned().collect();
                Ok(EnumeratorSequence { spec_name: self.spec_name.clone(), variables, mode: self.mode, values: Values::Truncated(values) })
            }
        }
    }

    /// Specializes every variable except the first (the studied statistic).
    pub fn marginal(&self) -> Result<EnumeratorSequence> {
        let rest: Vec<&str> = self.variables.iter().skip(1).map(|s| s.as_str()).collect();
        self.specialize(&rest)
    }
}

fn atom_poly(vars: &VarList, atom: &Atom, n: u64, k: u64) -> Result<MultiPoly> {
    let e = atom.eval_exponents(n, k)?;
    let mut m = Monomial::zero(vars.len());
    for (slot, v) in m.0.iter_mut().zip(&e) {
        if *v > crate::arith::EXPONENT_LIMIT {
            return Err(Error::Config("exponent exceeds the full-mode guard; use truncated mode".into()));
        }
        *slot = *v as u32;
    }
    let mut p = MultiPoly::zero(vars.clone());
    p.add_term(m, atom.scalar(n, k));
    Ok(p)
}

fn atoms_poly(vars: &VarList, atoms: &[Atom], n: u64, k: u64) -> Result<MultiPoly> {
    let mut acc = MultiPoly::zero(vars.clone());
    for a in atoms {
        acc.add_assign(&atom_poly(vars, a, n, k)?)?;
    }
    Ok(acc)
}

fn substitute_full(vars: &VarList, p: &MultiPoly, images: &[Image], n: u64, k: u64) -> Result<MultiPoly> {
    if p.len() == 1 && p.max_exponent() == 0 {
        return Ok(p.clone());
    }
    if images.iter().all(|i| i.unit_monomial().is_some()) {
        let rows = images
            .iter()
            .map(|i| i.unit_monomial().unwrap().eval_exponents(n, k))
            .collect::<Result<Vec<_>>>()?;
        let identity = rows.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &e)| e == (i == j) as u64));
        if identity {
            return Ok(p.clone());
        }
        return p.subst_monomial(&rows);
    }
    let polys = images.iter().map(|i| atoms_poly(vars, &i.atoms, n, k)).collect::<Result<Vec<_>>>()?;
    p.subst(&polys)
}

/// Evaluates the recurrence with exact polynomials for `n <= n_max`.
pub fn eval_full(spec: &FuncRecSpec, n_max: usize) -> Result<EnumeratorSequence> {
    eval_full_with_limit(spec, n_max, FULL_MODE_LIMIT)
}

pub fn eval_full_with_limit(spec: &FuncRecSpec, n_max: usize, limit: usize) -> Result<EnumeratorSequence> {
    if n_max > limit {
        return Err(Error::Config(format!(
            "n = {n_max} exceeds the full-mode limit {limit}; use truncated mode for moments"
        )));
    }
    let vars: VarList = var_list(&spec.variables);
    let mut q: Vec<MultiPoly> = vec![MultiPoly::one(vars.clone())];
    for n in 1..=n_max as u64 {
        let mut jobs = Vec::new();
        for term in &spec.terms {
            for k in term.k_range(n) {
                jobs.push((term, k));
            }
        }
        let parts: Vec<MultiPoly> = jobs
            .par_iter()
            .map(|&(term, k)| {
                let c = atoms_poly(&vars, &term.coef, n, k)?;
                if c.is_zero() {
                    return Ok(c);
                }
                let left = substitute_full(&vars, &q[k as usize - 1], &term.left, n, k)?;
                let right = substitute_full(&vars, &q[(n - k) as usize], &term.right, n, k)?;
                c.mul(&left)?.mul(&right)
            })
            .collect::<Result<_>>()?;
        let mut acc = MultiPoly::zero(vars.clone());
        for p in &parts {
            acc.add_assign(p)?;
        }
        q.push(acc);
    }
    Ok(EnumeratorSequence {
        spec_name: spec.name.clone(),
        variables: spec.variables.clone(),
        mode: Mode::Full,
        values: Values::Full(q),
    })
}

type SubstKey = Vec<Vec<(Rational, Vec<u64>)>>;

struct TruncatedContext {
    layout: Arc<SeriesLayout>,
    nvars: usize,
}

impl TruncatedContext {
    /// `prod_j (1 + d_j)^{e_j}`.
    fn monomial_series(&self, e: &[u64]) -> TruncatedSeries {
        let mut acc = TruncatedSeries::one(&self.layout);
        for (j, &ej) in e.iter().enumerate() {
            if ej > 0 {
                acc = acc.mul_unchecked(&TruncatedSeries::binomial(&self.layout, j, &BigInt::from(ej)));
            }
        }
        acc
    }

    fn atoms_series(&self, atoms: &[Atom], n: u64, k: u64) -> Result<TruncatedSeries> {
        let mut acc = TruncatedSeries::zero(&self.layout);
        for a in atoms {
            let c = a.scalar(n, k);
            if c.is_zero() {
                continue;
            }
            let e = a.eval_exponents(n, k)?;
            acc.add_scaled_unchecked(&self.monomial_series(&e), &c);
        }
        Ok(acc)
    }

    fn subst_key(&self, images: &[Image], n: u64, k: u64) -> Result<SubstKey> {
        images
            .iter()
            .map(|img| {
                img.atoms
                    .iter()
                    .map(|a| Ok((a.scalar(n, k), a.eval_exponents(n, k)?)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect()
    }

    fn build_substitution(&self, key: &SubstKey) -> Result<Substitution> {
        let mut images = Vec::with_capacity(self.nvars);
        for (i, atoms) in key.iter().enumerate() {
            let mut s = TruncatedSeries::zero(&self.layout);
            for (c, e) in atoms {
                s.add_scaled_unchecked(&self.monomial_series(e), c);
            }
            if !s.constant_term().is_one() {
                return Err(usage(format!(
                    "image of variable {i} takes the value {} at the all-ones point; truncated mode needs 1",
                    s.constant_term()
                )));
            }
            let s = s.sub(&TruncatedSeries::one(&self.layout))?;
            images.push(s);
        }
        Substitution::new(&self.layout, images)
    }
}

/// Evaluates `Q_n(1 + d)` as truncated series of total degree `<= cap`.
pub fn eval_truncated(spec: &FuncRecSpec, n_max: usize, cap: u32) -> Result<EnumeratorSequence> {
    if cap < 1 {
        return Err(usage("truncated mode needs a cap R >= 1"));
    }
    eval_truncated_any_cap(spec, n_max, cap)
}

fn eval_truncated_any_cap(spec: &FuncRecSpec, n_max: usize, cap: u32) -> Result<EnumeratorSequence> {
    let devs: Vec<String> = spec.variables.iter().map(|v| deviation_name(v)).collect();
    let ctx = TruncatedContext { layout: SeriesLayout::new(&devs, cap), nvars: spec.nvars() };
    let mut cache: HashMap<SubstKey, Arc<Substitution>> = HashMap::new();
    let mut q: Vec<TruncatedSeries> = vec![TruncatedSeries::one(&ctx.layout)];
    for n in 1..=n_max as u64 {
        let mut jobs = Vec::new();
        for term in &spec.terms {
            for k in term.k_range(n) {
                let mut subs = Vec::with_capacity(2);
                for images in [&term.left, &term.right] {
                    let key = ctx.subst_key(images, n, k)?;
                    let sub = match cache.get(&key) {
                        Some(s) => s.clone(),
                        None => {
                            let s = Arc::new(ctx.build_substitution(&key)?);
                            cache.insert(key, s.clone());
                            s
                        }
                    };
                    subs.push(sub);
                }
                let right = subs.pop().unwrap();
                let left = subs.pop().unwrap();
                jobs.push((term, k, left, right));
            }
        }
        let parts: Vec<TruncatedSeries> = jobs
            .par_iter()
            .map(|(term, k, left, right)| {
                let k = *k;
                let c = ctx.atoms_series(&term.coef, n, k)?;
                let l = left.apply(&q[k as usize - 1])?;
                let r = right.apply(&q[(n - k) as usize])?;
                Ok(c.mul_unchecked(&l).mul_unchecked(&r))
            })
            .collect::<Result<_>>()?;
        let mut acc = TruncatedSeries::zero(&ctx.layout);
        for p in &parts {
            acc.add_assign_unchecked(p);
        }
        q.push(acc);
    }
    Ok(EnumeratorSequence {
        spec_name: spec.name.clone(),
        variables: devs,
        mode: Mode::Truncated { cap },
        values: Values::Truncated(q),
    })
}
