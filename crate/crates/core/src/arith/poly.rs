use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::Rational;
use crate::error::{usage, Error, Result};

/// Largest exponent full-polynomial arithmetic will produce.
pub const EXPONENT_LIMIT: u64 = 1 << 31;

/// Exponent vector, one entry per variable.
///
/// Ordered graded-lexicographically: total degree first, then the
/// exponent vectors compared entrywise.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub SmallVec<[u32; 4]>);

impl Monomial {
    pub fn zero(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_slice(e: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            let s = *a as u64 + *b as u64;
            if s > EXPONENT_LIMIT {
                return None;
            }
            out.push(s as u32);
        }
        Some(Monomial(out))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

pub type VarList = Arc<[String]>;

pub fn var_list<S: AsRef<str>>(names: &[S]) -> VarList {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

fn exponent_guard() -> Error {
    Error::Config(format!(
        "exponent exceeds {EXPONENT_LIMIT} in full-polynomial mode; use truncated mode instead"
    ))
}

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: VarList,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: VarList) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: VarList) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: VarList, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        let m = Monomial::zero(p.vars.len());
        p.add_term(m, c);
        p
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(vars: VarList, name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| usage(format!("unknown variable {name:?}")))?;
        let mut m = Monomial::zero(vars.len());
        m.0[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(m, Rational::one());
        Ok(p)
    }

    pub fn from_terms<I>(vars: VarList, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Vec<u32>)>,
    {
        let mut p = Self::zero(vars);
        for (c, e) in terms {
            if e.len() != p.vars.len() {
                return Err(usage(format!(
                    "exponent vector of length {} for {} variables",
                    e.len(),
                    p.vars.len()
                )));
            }
            p.add_term(Monomial::from_slice(&e), c);
        }
        Ok(p)
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn var_list(&self) -> &VarList {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(&Monomial::from_slice(exps)).cloned().unwrap_or_default()
    }

    pub fn max_exponent(&self) -> u32 {
        self.terms.keys().flat_map(|m| m.0.iter().copied()).max().unwrap_or(0)
    }

    /// Adds `c * x^m`, removing the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &MultiPoly) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(usage(format!(
                "variable lists differ: {:?} vs {:?}",
                self.vars, other.vars
            )))
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &MultiPoly) -> Result<()> {
        self.check_vars(other)?;
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
        Ok(())
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.vars.clone());
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(MultiPoly::zero(self.vars.clone()));
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.checked_mul(mb).ok_or_else(exponent_guard)?;
                let c = ca * cb;
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += &c,
                }
            }
        }
        Ok(MultiPoly {
            vars: self.vars.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn pow(&self, e: u32) -> Result<MultiPoly> {
        let mut out = MultiPoly::one(self.vars.clone());
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Multiplies by the unit monomial `x^e`.
    pub fn mul_monomial(&self, e: &[u32]) -> Result<MultiPoly> {
        if e.len() != self.nvars() {
            return Err(usage("monomial length does not match variable count"));
        }
        let shift = Monomial::from_slice(e);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.checked_mul(&shift).ok_or_else(exponent_guard)?, c.clone());
        }
        Ok(MultiPoly { vars: self.vars.clone(), terms })
    }

    /// Substitutes every variable `x_i` by the unit monomial `prod_j x_j^{images[i][j]}`.
    ///
    /// Exponent vectors transform linearly; coefficients are untouched.
    pub fn subst_monomial(&self, images: &[Vec<u64>]) -> Result<MultiPoly> {
        let nv = self.nvars();
        if images.len() != nv || images.iter().any(|row| row.len() != nv) {
            return Err(usage("substitution map must give one image exponent vector per variable"));
        }
        let mut out = MultiPoly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let mut e = Monomial::zero(nv);
            for j in 0..nv {
                let mut s: u64 = 0;
                for (i, &ei) in m.0.iter().enumerate() {
                    s = s
                        .checked_add((ei as u64).checked_mul(images[i][j]).ok_or_else(exponent_guard)?)
                        .ok_or_else(exponent_guard)?;
                }
                if s > EXPONENT_LIMIT {
                    return Err(exponent_guard());
                }
                e.0[j] = s as u32;
            }
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// General substitution `x_i -> images[i]`.
    pub fn subst(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.nvars() {
            return Err(usage("substitution map must give one image per variable"));
        }
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(self.clone()),
        };
        for img in images {
            if img.vars != target {
                return Err(usage("substitution images must share a variable list"));
            }
        }
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![MultiPoly::one(target.clone()), p.clone()]).collect();
        let mut out = MultiPoly::zero(target.clone());
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(target.clone(), c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i])?;
                    powers[i].push(next);
                }
                if e > 0 {
                    term = term.mul(&powers[i][e as usize])?;
                }
            }
            out.add_assign(&term)?;
        }
        Ok(out)
    }

    /// Sets each named variable to 1 and drops it from the variable list.
    pub fn specialize_to_one(&self, names: &[&str]) -> Result<MultiPoly> {
        let mut drop = vec![false; self.nvars()];
        for name in names {
            let i = self
                .vars
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| usage(format!("unknown variable {name:?}")))?;
            drop[i] = true;
        }
        let keep: Vec<usize> = (0..self.nvars()).filter(|&i| !drop[i]).collect();
        let vars: VarList = keep.iter().map(|&i| self.vars[i].clone()).collect::<Vec<_>>().into();
        let mut out = MultiPoly::zero(vars);
        for (m, c) in &self.terms {
            let e: SmallVec<[u32; 4]> = keep.iter().map(|&i| m.0[i]).collect();
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Sum of all coefficients.
    pub fn eval_ones(&self) -> Rational {
        self.terms.values().sum()
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars() {
            return Err(usage("evaluation point has the wrong dimension"));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    v = &v * &x.pow(e);
                }
            }
            acc += &v;
        }
        Ok(acc)
    }

    /// Coefficients of a univariate polynomial, index = exponent.
    pub fn univariate_coeffs(&self) -> Result<Vec<Rational>> {
        if self.nvars() != 1 {
            return Err(usage("expected a univariate polynomial"));
        }
        let deg = self.max_exponent() as usize;
        let mut out = vec![Rational::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            out[m.0[0] as usize] = c.clone();
        }
        Ok(out)
    }

    pub fn to_wire(&self) -> PolyWire {
        PolyWire {
            variables: self.vars.to_vec(),
            terms: self.terms.iter().map(|(m, c)| (c.clone(), m.0.to_vec())).collect(),
        }
    }

    pub fn from_wire(w: &PolyWire) -> Result<MultiPoly> {
        MultiPoly::from_terms(var_list(&w.variables), w.terms.iter().cloned())
    }
}

/// Serialized polynomial: variables once, then `[coefficient, exponents]`
/// pairs in graded-lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyWire {
    pub variables: Vec<String>,
    pub terms: Vec<(Rational, Vec<u32>)>,
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = PolyWire::deserialize(d)?;
        MultiPoly::from_wire(&w).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono: Vec<String> = m
                .0
                .iter()
                .zip(self.vars.iter())
                .filter(|(&e, _)| e > 0)
                .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            let coef = if mag.is_integer() { mag.to_string() } else { format!("({mag})") };
            if mono.is_empty() {
                write!(f, "{coef}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{coef}{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({self})", self.vars.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tq() -> VarList {
        var_list(&["t", "q"])
    }

    fn poly(vars: &VarList, terms: &[(i64, &[u32])]) -> MultiPoly {
        MultiPoly::from_terms(vars.clone(), terms.iter().map(|(c, e)| (Rational::from(*c), e.to_vec()))).unwrap()
    }

    #[test]
    fn square_of_binomial() {
        let v = var_list(&["t"]);
        let a = poly(&v, &[(1, &[0]), (1, &[1])]);
        assert_eq!(a.mul(&a).unwrap(), poly(&v, &[(1, &[0]), (2, &[1]), (1, &[2])]));
        assert_eq!(a.mul(&MultiPoly::one(v.clone())).unwrap(), a);
    }

    #[test]
    fn product_in_two_variables() {
        let v = tq();
        let a = poly(&v, &[(1, &[0, 0]), (1, &[1, 0])]);
        let b = poly(&v, &[(1, &[1, 0]), (2, &[2, 0])]);
        assert_eq!(a.mul(&b).unwrap(), poly(&v, &[(1, &[1, 0]), (3, &[2, 0]), (2, &[3, 0])]));
    }

    #[test]
    fn mismatched_variables_rejected() {
        let a = MultiPoly::one(var_list(&["t"]));
        let b = MultiPoly::one(tq());
        assert!(matches!(a.mul(&b), Err(Error::Usage(_))));
    }

    #[test]
    fn monomial_substitution() {
        let v = tq();
        // t q^2 with q -> t^3 q gives t^7 q^2
        let p = poly(&v, &[(1, &[1, 2])]);
        let map = vec![vec![1, 0], vec![3, 1]];
        assert_eq!(p.subst_monomial(&map).unwrap(), poly(&v, &[(1, &[7, 2])]));
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(p.subst_monomial(&id).unwrap(), p);
        let p = poly(&v, &[(1, &[0, 0]), (1, &[0, 1])]);
        let map = vec![vec![1, 0], vec![2, 1]];
        assert_eq!(p.subst_monomial(&map).unwrap(), poly(&v, &[(1, &[0, 0]), (1, &[2, 1])]));
    }

    #[test]
    fn exponent_guard_trips() {
        let v = var_list(&["t"]);
        let p = poly(&v, &[(1, &[1 << 30])]);
        assert!(matches!(p.mul(&p).and_then(|x| x.mul(&p)), Err(Error::Config(_))));
    }

    #[test]
    fn general_substitution_matches_monomial_path() {
        let v = tq();
        let p = poly(&v, &[(1, &[0, 0]), (3, &[1, 2]), (-2, &[2, 1])]);
        let images = vec![poly(&v, &[(1, &[1, 0])]), poly(&v, &[(1, &[2, 1])])];
        let map = vec![vec![1, 0], vec![2, 1]];
        assert_eq!(p.subst(&images).unwrap(), p.subst_monomial(&map).unwrap());
    }

    #[test]
    fn specialization_and_display() {
        let v = tq();
        let p = poly(&v, &[(2, &[0, 1]), (1, &[1, 0]), (1, &[1, 3])]);
        let s = p.specialize_to_one(&["q"]).unwrap();
        assert_eq!(s.to_string(), "2 + 2t");
        let v1 = var_list(&["t"]);
        assert_eq!(poly(&v1, &[(1, &[0]), (1, &[1]), (2, &[2]), (1, &[3])]).to_string(), "1 + t + 2t^2 + t^3");
        assert!(p.specialize_to_one(&["z"]).is_err());
    }

    #[test]
    fn wire_form_is_graded_lex() {
        let v = tq();
        let p = poly(&v, &[(1, &[2, 0]), (1, &[0, 1]), (5, &[0, 0])]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"variables":["t","q"],"terms":[["5/1",[0,0]],["1/1",[0,1]],["1/1",[2,0]]]}"#);
        let back: MultiPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
