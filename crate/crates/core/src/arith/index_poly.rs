use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Integer polynomial in the two index symbols `n` and `k`.
///
/// Keys are `(deg_n, deg_k)`; zero coefficients are never stored. Used for
/// exponents such as `k*(n-k)` whose value depends on the summation index.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct IndexPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl IndexPoly {
    pub fn zero() -> Self {
        IndexPoly::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn n() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn k() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn monomial(c: i64, deg_n: u32, deg_k: u32) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert((deg_n, deg_k), BigInt::from(c));
        }
        IndexPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn eval(&self, n: u64, k: u64) -> BigInt {
        let n = BigInt::from(n);
        let k = BigInt::from(k);
        self.terms
            .iter()
            .map(|(&(dn, dk), c)| c * num_traits::pow(n.clone(), dn as usize) * num_traits::pow(k.clone(), dk as usize))
            .sum()
    }

    /// Evaluation as a machine exponent; `None` when negative or out of `u64`.
    pub fn eval_u64(&self, n: u64, k: u64) -> Option<u64> {
        let v = self.eval(n, k);
        if v.is_negative() {
            None
        } else {
            v.to_u64()
        }
    }

    fn insert_add(&mut self, key: (u32, u32), c: BigInt) {
        let e = self.terms.entry(key).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }
}

impl Add for IndexPoly {
    type Output = IndexPoly;
    fn add(mut self, rhs: IndexPoly) -> IndexPoly {
        for (key, c) in rhs.terms {
            self.insert_add(key, c);
        }
        self
    }
}

impl Neg for IndexPoly {
    type Output = IndexPoly;
    fn neg(mut self) -> IndexPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Sub for IndexPoly {
    type Output = IndexPoly;
    fn sub(self, rhs: IndexPoly) -> IndexPoly {
        self + (-rhs)
    }
}

impl Mul for IndexPoly {
    type Output = IndexPoly;
    fn mul(self, rhs: IndexPoly) -> IndexPoly {
        let mut out = IndexPoly::zero();
        for (&(an, ak), ca) in &self.terms {
            for (&(bn, bk), cb) in &rhs.terms {
                out.insert_add((an + bn, ak + bk), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for IndexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest degree first, the way people write k*n - k^2
        for (i, (&(dn, dk), c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !mag.is_one() || (dn == 0 && dk == 0) {
                factors.push(mag.to_string());
            }
            for (sym, d) in [("n", dn), ("k", dk)] {
                match d {
                    0 => {}
                    1 => factors.push(sym.to_string()),
                    _ => factors.push(format!("{sym}^{d}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for IndexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexPoly({self})")
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!(
            "index polynomial {:?}: {what} at offset {}",
            String::from_utf8_lossy(self.src),
            self.pos
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<BigInt, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.err("expected integer"))
    }

    fn expr(&mut self) -> Result<IndexPoly, Error> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IndexPoly, Error> {
        let mut acc = self.power()?;
        while let Some(c) = self.peek() {
            if c == b'*' {
                self.pos += 1;
                acc = acc * self.power()?;
            } else if c == b'(' || c == b'n' || c == b'k' {
                // implicit multiplication: 2n, 3(n-k)
                acc = acc * self.power()?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<IndexPoly, Error> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.number()?.to_u32().ok_or_else(|| self.err("exponent too large"))?;
            let mut acc = IndexPoly::constant(1);
            for _ in 0..e {
                acc = acc * base.clone();
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IndexPoly, Error> {
        match self.peek() {
            Some(b'n') => {
                self.pos += 1;
                Ok(IndexPoly::n())
            }
            Some(b'k') => {
                self.pos += 1;
                Ok(IndexPoly::k())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.number()?;
                let mut p = IndexPoly::zero();
                if !v.is_zero() {
                    p.terms.insert((0, 0), v);
                }
                Ok(p)
            }
            _ => Err(self.err("expected n, k, integer or '('")),
        }
    }
}

impl FromStr for IndexPoly {
    type Err = Error;

    /// Parses expressions such as `k*(n-k)`, `n + k^2`, `2n - 1`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let out = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

impl Serialize for IndexPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IndexPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
