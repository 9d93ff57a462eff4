use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::poly::{var_list, Monomial, MultiPoly};
use super::Rational;
use crate::error::{usage, Result};

type Exps = SmallVec<[u32; 4]>;

/// Dense index of every monomial of total degree `<= cap` in a fixed
/// variable list, with a precomputed multiplication table.
#[derive(Debug)]
pub struct SeriesLayout {
    vars: Vec<String>,
    cap: u32,
    monomials: Vec<Exps>,
    index: HashMap<Exps, usize>,
    // mul_table[i] lists (j, index of m_i * m_j) for all j with deg(i)+deg(j) <= cap
    mul_table: Vec<Vec<(u32, u32)>>,
}

impl SeriesLayout {
    pub fn new<S: AsRef<str>>(vars: &[S], cap: u32) -> Arc<SeriesLayout> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let nv = vars.len();
        let mut monomials: Vec<Exps> = Vec::new();
        for d in 0..=cap {
            let mut cur = SmallVec::from_elem(0, nv);
            compositions(d, 0, &mut cur, &mut monomials);
        }
        // graded, then lexicographic on exponents: same order as Monomial
        monomials.sort_by_key(|a| Monomial(a.clone()));
        let index: HashMap<Exps, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let degree = |m: &Exps| m.iter().sum::<u32>();
        let mul_table = monomials
            .iter()
            .map(|a| {
                monomials
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| degree(a) + degree(b) <= cap)
                    .map(|(j, b)| {
                        let prod: Exps = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
                        (j as u32, index[&prod] as u32)
                    })
                    .collect()
            })
            .collect();
        Arc::new(SeriesLayout { vars, cap, monomials, index, mul_table })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &[u32] {
        &self.monomials[i]
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    pub fn var_position(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    fn same(&self, other: &SeriesLayout) -> bool {
        std::ptr::eq(self, other) || (self.cap == other.cap && self.vars == other.vars)
    }
}

fn compositions(remaining: u32, pos: usize, cur: &mut Exps, out: &mut Vec<Exps>) {
    if pos + 1 >= cur.len() {
        if let Some(last) = cur.last_mut() {
            *last = remaining;
            out.push(cur.clone());
        } else if remaining == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for e in 0..=remaining {
        cur[pos] = e;
        compositions(remaining - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

/// Multivariate power series truncated at a total-degree cap.
///
/// Every operation discards terms of total degree above the cap.
#[derive(Clone)]
pub struct TruncatedSeries {
    layout: Arc<SeriesLayout>,
    coeffs: Vec<Rational>,
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.layout.same(&other.layout) && self.coeffs == other.coeffs
    }
}

impl Eq for TruncatedSeries {}

impl TruncatedSeries {
    pub fn zero(layout: &Arc<SeriesLayout>) -> Self {
        TruncatedSeries { layout: layout.clone(), coeffs: vec![Rational::zero(); layout.len()] }
    }

    pub fn constant(layout: &Arc<SeriesLayout>, c: Rational) -> Self {
        let mut s = Self::zero(layout);
        s.coeffs[0] = c;
        s
    }

    pub fn one(layout: &Arc<SeriesLayout>) -> Self {
        Self::constant(layout, Rational::one())
    }

    /// The series consisting of variable number `i` (zero if the cap is 0).
    pub fn var(layout: &Arc<SeriesLayout>, i: usize) -> Self {
        let mut s = Self::zero(layout);
        let mut e: Exps = SmallVec::from_elem(0, layout.vars.len());
        e[i] = 1;
        if let Some(j) = layout.index_of(&e) {
            s.coeffs[j] = Rational::one();
        }
        s
    }

    pub fn layout(&self) -> &Arc<SeriesLayout> {
        &self.layout
    }

    pub fn vars(&self) -> &[String] {
        &self.layout.vars
    }

    pub fn cap(&self) -> u32 {
        self.layout.cap
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.layout.index_of(exps).map(|i| self.coeffs[i].clone()).unwrap_or_default()
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Truncates a polynomial in the same variables.
    pub fn from_poly(layout: &Arc<SeriesLayout>, p: &MultiPoly) -> Result<Self> {
        if p.variables() != layout.vars.as_slice() {
            return Err(usage("polynomial variables do not match the series layout"));
        }
        let mut s = Self::zero(layout);
        for (m, c) in p.terms() {
            if let Some(i) = layout.index_of(m.exponents()) {
                s.coeffs[i] = c.clone();
            }
        }
        Ok(s)
    }

    pub fn to_poly(&self) -> MultiPoly {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (c.clone(), self.layout.monomials[i].to_vec()));
        MultiPoly::from_terms(var_list(&self.layout.vars), terms).expect("layout monomials have the right length")
    }

    fn check(&self, other: &TruncatedSeries) -> Result<()> {
        if self.layout.same(&other.layout) {
            Ok(())
        } else if self.layout.cap != other.layout.cap {
            Err(usage(format!("series caps differ: {} vs {}", self.layout.cap, other.layout.cap)))
        } else {
            Err(usage("series variable lists differ"))
        }
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries { layout: self.layout.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &TruncatedSeries) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    pub(crate) fn add_scaled_unchecked(&mut self, other: &TruncatedSeries, c: &Rational) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += &(b * c);
            }
        }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &TruncatedSeries) -> Self {
        let mut out = Self::zero(&self.layout);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, k) in &self.layout.mul_table[i] {
                let b = &other.coeffs[j as usize];
                if !b.is_zero() {
                    out.coeffs[k as usize] += &(a * b);
                }
            }
        }
        out
    }

    /// Product with the unit monomial at layout index `i`.
    fn shifted(&self, i: usize) -> Self {
        if i == 0 {
            return self.clone();
        }
        let mut out = Self::zero(&self.layout);
        for &(j, k) in &self.layout.mul_table[i] {
            out.coeffs[k as usize] = self.coeffs[j as usize].clone();
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(&self.layout);
        for _ in 0..e {
            out = out.mul_unchecked(self);
        }
        out
    }

    /// `(1 + x_var)^e`, exact, truncated at the layout cap.
    pub fn binomial(layout: &Arc<SeriesLayout>, var: usize, e: &BigInt) -> Self {
        let mut s = Self::zero(layout);
        let mut exps: Exps = SmallVec::from_elem(0, layout.vars.len());
        let mut c = BigInt::one();
        for j in 0..=layout.cap {
            if c.is_zero() {
                break;
            }
            exps[var] = j;
            let i = layout.index_of(&exps).expect("degree within cap");
            s.coeffs[i] = Rational::from_integer(c.clone());
            // C(e, j+1) = C(e, j) * (e - j) / (j + 1)
            c = c * (e - BigInt::from(j)) / BigInt::from(j + 1);
        }
        s
    }

    /// `sum_m c_m * prod_i images[i]^{m_i}`; every image must have zero constant term.
    pub fn compose(&self, images: &[TruncatedSeries]) -> Result<Self> {
        Substitution::new(&self.layout, images.to_vec())?.apply(self)
    }

    /// Keeps only terms with zero exponent in each named variable and drops
    /// those variables: the deviation of each is set to zero.
    pub fn drop_variables(&self, names: &[&str]) -> Result<Self> {
        let nv = self.layout.vars.len();
        let mut drop = vec![false; nv];
        for name in names {
            let i = self.layout.var_position(name).ok_or_else(|| usage(format!("unknown variable {name:?}")))?;
            drop[i] = true;
        }
        let keep: Vec<usize> = (0..nv).filter(|&i| !drop[i]).collect();
        let vars: Vec<&str> = keep.iter().map(|&i| self.layout.vars[i].as_str()).collect();
        let layout = SeriesLayout::new(&vars, self.layout.cap);
        let mut out = Self::zero(&layout);
        for (i, c) in self.coeffs.iter().enumerate() {
            let m = &self.layout.monomials[i];
            if (0..nv).any(|v| drop[v] && m[v] > 0) {
                continue;
            }
            let e: Exps = keep.iter().map(|&v| m[v]).collect();
            out.coeffs[layout.index[&e]] = c.clone();
        }
        Ok(out)
    }

    pub fn to_wire(&self) -> SeriesWire {
        SeriesWire {
            variables: self.layout.vars.clone(),
            cap: self.layout.cap,
            terms: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (c.clone(), self.layout.monomials[i].to_vec()))
                .collect(),
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(deg {})", self.to_poly(), self.layout.cap + 1)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries[{}; cap {}]({})", self.layout.vars.join(","), self.layout.cap, self.to_poly())
    }
}

/// Serialized truncated series; same term layout as polynomials plus the cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesWire {
    pub variables: Vec<String>,
    pub cap: u32,
    pub terms: Vec<(Rational, Vec<u32>)>,
}

/// A prepared substitution `x_i -> images[i]` with cached image powers.
///
/// Identity images are detected and realized as monomial shifts.
pub struct Substitution {
    layout: Arc<SeriesLayout>,
    identity: Vec<bool>,
    powers: Vec<Vec<TruncatedSeries>>,
}

impl Substitution {
    pub fn new(layout: &Arc<SeriesLayout>, images: Vec<TruncatedSeries>) -> Result<Self> {
        let nv = layout.vars.len();
        if images.len() != nv {
            return Err(usage(format!("substitution needs {nv} images, got {}", images.len())));
        }
        for img in &images {
            if !img.layout.same(layout) {
                return Err(usage("substitution image has a different layout (cap mismatch or variables)"));
            }
            if !img.constant_term().is_zero() {
                return Err(usage("substitution image has a nonzero constant term; the expansion point is not preserved"));
            }
        }
        let identity: Vec<bool> = images
            .iter()
            .enumerate()
            .map(|(i, img)| *img == TruncatedSeries::var(layout, i))
            .collect();
        let powers = images
            .iter()
            .zip(&identity)
            .map(|(img, &id)| {
                if id {
                    return Vec::new();
                }
                let mut p = vec![TruncatedSeries::one(layout)];
                for j in 1..=layout.cap as usize {
                    let next = p[j - 1].mul_unchecked(img);
                    p.push(next);
                }
                p
            })
            .collect();
        Ok(Substitution { layout: layout.clone(), identity, powers })
    }

    pub fn identity(layout: &Arc<SeriesLayout>) -> Self {
        let images = (0..layout.vars.len()).map(|i| TruncatedSeries::var(layout, i)).collect();
        Self::new(layout, images).expect("identity images are valid")
    }

    pub fn is_identity(&self) -> bool {
        self.identity.iter().all(|&b| b)
    }

    pub fn apply(&self, s: &TruncatedSeries) -> Result<TruncatedSeries> {
        if !s.layout.same(&self.layout) {
            return Err(usage("series layout does not match the substitution"));
        }
        if self.is_identity() {
            return Ok(s.clone());
        }
        let layout = &self.layout;
        let nv = layout.vars.len();
        let mut out = TruncatedSeries::zero(layout);
        let mut id_part: Exps = SmallVec::from_elem(0, nv);
        for (i, c) in s.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = &layout.monomials[i];
            let mut moving = Vec::new();
            for v in 0..nv {
                if self.identity[v] {
                    id_part[v] = m[v];
                } else {
                    id_part[v] = 0;
                    if m[v] > 0 {
                        moving.push(v);
                    }
                }
            }
            let shift = layout.index[&id_part];
            match moving.split_first() {
                None => out.coeffs[shift] += c,
                Some((&first, rest)) => {
                    let mut prod = self.powers[first][m[first] as usize].shifted(shift);
                    for &v in rest {
                        prod = prod.mul_unchecked(&self.powers[v][m[v] as usize]);
                    }
                    out.add_scaled_unchecked(&prod, c);
                }
            }
        }
        Ok(out)
    }
}

/// `sum_{j<=cap} C(e, j) var^j` as a univariate series.
pub fn binomial_series(e: &BigInt, var: &str, cap: u32) -> TruncatedSeries {
    TruncatedSeries::binomial(&SeriesLayout::new(&[var], cap), 0, e)
}
