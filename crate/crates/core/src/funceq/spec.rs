use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{catalan_table, IndexPoly, Rational};
use crate::error::{usage, Error, Result};

/// Largest `n` used by the construction-time checks.
pub const VALIDATION_N: usize = 12;

fn one() -> Rational {
    Rational::one()
}

/// `coef * n^n_deg * k^k_deg * prod_i x_i^{exponents[i](n,k)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(default = "one")]
    pub coef: Rational,
    #[serde(default)]
    pub n_deg: u32,
    #[serde(default)]
    pub k_deg: u32,
    pub exponents: Vec<IndexPoly>,
}

impl Atom {
    /// Unit-coefficient monomial with the given exponents.
    pub fn monomial(exponents: Vec<IndexPoly>) -> Self {
        Atom { coef: Rational::one(), n_deg: 0, k_deg: 0, exponents }
    }

    /// The numeric factor `coef * n^a * k^b`.
    pub fn scalar(&self, n: u64, k: u64) -> Rational {
        let nk = num_traits::pow(BigInt::from(n), self.n_deg as usize) * num_traits::pow(BigInt::from(k), self.k_deg as usize);
        &self.coef * &Rational::from_integer(nk)
    }

    /// Exponents evaluated at `(n, k)`; a negative value is an error.
    pub fn eval_exponents(&self, n: u64, k: u64) -> Result<Vec<u64>> {
        self.exponents
            .iter()
            .map(|e| {
                e.eval_u64(n, k).ok_or_else(|| {
                    Error::Internal(format!("exponent {e} is negative or oversized at n = {n}, k = {k}"))
                })
            })
            .collect()
    }

    fn is_unit_monomial(&self) -> bool {
        self.coef.is_one() && self.n_deg == 0 && self.k_deg == 0
    }
}

/// Image of one variable under a substitution: a sum of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Image {
    pub atoms: Vec<Atom>,
}

impl Image {
    pub fn monomial(exponents: Vec<IndexPoly>) -> Self {
        Image { atoms: vec![Atom::monomial(exponents)] }
    }

    /// The variable `i` itself, in a spec with `nvars` variables.
    pub fn identity(i: usize, nvars: usize) -> Self {
        let e = (0..nvars).map(|j| IndexPoly::constant((i == j) as i64)).collect();
        Image::monomial(e)
    }

    /// Exponent vector when this image is a unit-coefficient monomial.
    pub fn unit_monomial(&self) -> Option<&Atom> {
        match self.atoms.as_slice() {
            [a] if a.is_unit_monomial() => Some(a),
            _ => None,
        }
    }
}

/// `sum_{k=k_low}^{k_high or n} coef(n,k) Q_{k-1}(left) Q_{n-k}(right)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecTerm {
    pub k_low: u32,
    /// Upper end of the k-range; `None` means `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_high: Option<u32>,
    pub coef: Vec<Atom>,
    pub left: Vec<Image>,
    pub right: Vec<Image>,
}

impl RecTerm {
    pub fn k_range(&self, n: u64) -> std::ops::RangeInclusive<u64> {
        let hi = self.k_high.map(|h| (h as u64).min(n)).unwrap_or(n);
        (self.k_low as u64)..=hi
    }
}

/// A Catalan-type functional recurrence with catalytic variables.
///
/// `Q_0 = 1` and `Q_n = sum over terms`. The first variable is the one
/// whose statistic is being studied; the rest are catalytic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuncRecSpec {
    pub name: String,
    pub variables: Vec<String>,
    pub terms: Vec<RecTerm>,
}

impl FuncRecSpec {
    /// Builds and validates a spec.
    pub fn new(name: impl Into<String>, variables: Vec<String>, terms: Vec<RecTerm>) -> Result<Self> {
        let spec = FuncRecSpec { name: name.into(), variables, terms };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let spec: FuncRecSpec =
            serde_json::from_str(src).map_err(|e| Error::Parse(format!("recurrence spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    /// Shape checks, non-negative exponents for `n <= 12`, and the
    /// all-ones mass check against the Catalan numbers.
    pub fn validate(&self) -> Result<()> {
        let nv = self.nvars();
        if nv == 0 {
            return Err(usage("a recurrence needs at least one variable"));
        }
        if self.terms.is_empty() {
            return Err(usage("a recurrence needs at least one term"));
        }
        for (ti, term) in self.terms.iter().enumerate() {
            if term.k_low == 0 {
                return Err(usage(format!("term {ti}: k_low must be >= 1")));
            }
            if term.k_high.is_some_and(|h| h < term.k_low) {
                return Err(usage(format!("term {ti}: empty k-range")));
            }
            if term.left.len() != nv || term.right.len() != nv {
                return Err(usage(format!("term {ti}: substitutions need one image per variable")));
            }
            let atoms = term.coef.iter().chain(term.left.iter().chain(&term.right).flat_map(|i| &i.atoms));
            for atom in atoms {
                if atom.exponents.len() != nv {
                    return Err(usage(format!("term {ti}: atom has {} exponents for {nv} variables", atom.exponents.len())));
                }
            }
            for n in 1..=VALIDATION_N as u64 {
                for k in term.k_range(n) {
                    for atom in term.coef.iter().chain(term.left.iter().chain(&term.right).flat_map(|i| &i.atoms)) {
                        atom.eval_exponents(n, k).map_err(|e| usage(format!("term {ti}: {e}")))?;
                    }
                }
            }
        }
        let masses = self.masses(VALIDATION_N)?;
        let cat = catalan_table(VALIDATION_N);
        for (n, (m, c)) in masses.iter().zip(&cat).enumerate() {
            if m != &Rational::from_integer(c.clone()) {
                return Err(usage(format!(
                    "recurrence {:?} has mass {m} at n = {n}, expected the Catalan number {c}",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// `Q_n(1,...,1)` for `n <= n_max`.
    pub fn masses(&self, n_max: usize) -> Result<Vec<Rational>> {
        let unit_images = self
            .terms
            .iter()
            .all(|t| t.left.iter().chain(&t.right).all(|i| i.unit_monomial().is_some()));
        if !unit_images {
            let seq = super::eval_full(self, n_max)?;
            return Ok(seq.full().expect("full mode").iter().map(|p| p.eval_ones()).collect());
        }
        let mut mass = vec![Rational::one()];
        for n in 1..=n_max as u64 {
            let mut acc = Rational::zero();
            for term in &self.terms {
                for k in term.k_range(n) {
                    let c: Rational = term.coef.iter().map(|a| a.scalar(n, k)).sum();
                    acc += &(&c * &(&mass[k as usize - 1] * &mass[(n - k) as usize]));
                }
            }
            mass.push(acc);
        }
        Ok(mass)
    }
}
