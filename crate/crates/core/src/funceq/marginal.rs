use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;

use super::eval::{eval_full_with_limit, EnumeratorSequence, Mode, Values, FULL_MODE_LIMIT};
use super::spec::{Atom, FuncRecSpec};
use crate::arith::{var_list, Monomial, MultiPoly, Rational};
use crate::error::{usage, Error, Result};

/// Longest dense coefficient vector before falling back.
const DENSE_LIMIT: u64 = 1 << 22;

/// Dense univariate polynomial with non-negative integer coefficients.
type Dense = Rc<Vec<u128>>;

/// Memoized `Q_m` at points where each spec variable is a power of the kept one.
struct Marginal<'a> {
    spec: &'a FuncRecSpec,
    memo: HashMap<(usize, Vec<u64>), Dense>,
}

fn overflow() -> Error {
    Error::Config("coefficient overflow in the marginal evaluator".into())
}

fn integer_scalar(a: &Atom, n: u64, k: u64) -> Option<u128> {
    let s = a.scalar(n, k);
    let i = s.to_integer()?;
    u128::try_from(i).ok()
}

/// `sum_j e_j p_j`, the exponent of the kept variable after substituting the point.
fn dot(e: &[u64], point: &[u64]) -> Option<u64> {
    e.iter().zip(point).try_fold(0u64, |acc, (&a, &b)| acc.checked_add(a.checked_mul(b)?))
}

fn mul_into(acc: &mut Vec<u128>, a: &[u128], b: &[u128], scale: u128, shift: usize) -> Result<()> {
    let need = shift + a.len() + b.len() - 1;
    if acc.len() < need {
        acc.resize(need, 0);
    }
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let x = x.checked_mul(scale).ok_or_else(overflow)?;
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                let slot = &mut acc[shift + i + j];
                *slot = slot.checked_add(x.checked_mul(y).ok_or_else(overflow)?).ok_or_else(overflow)?;
            }
        }
    }
    Ok(())
}

impl Marginal<'_> {
    fn image_point(&self, images: &[super::spec::Image], n: u64, k: u64, point: &[u64]) -> Result<Vec<u64>> {
        images
            .iter()
            .map(|img| {
                let e = img.unit_monomial().expect("checked by the caller").eval_exponents(n, k)?;
                dot(&e, point).ok_or_else(overflow)
            })
            .collect()
    }

    fn value(&mut self, m: usize, point: &[u64]) -> Result<Dense> {
        if m == 0 {
            return Ok(Rc::new(vec![1]));
        }
        if let Some(v) = self.memo.get(&(m, point.to_vec())) {
            return Ok(v.clone());
        }
        let n = m as u64;
        let mut acc: Vec<u128> = Vec::new();
        for term in &self.spec.terms {
            for k in term.k_range(n) {
                let lp = self.image_point(&term.left, n, k, point)?;
                let rp = self.image_point(&term.right, n, k, point)?;
                let left = self.value(k as usize - 1, &lp)?;
                let right = self.value((n - k) as usize, &rp)?;
                for atom in &term.coef {
                    let c = integer_scalar(atom, n, k).ok_or_else(overflow)?;
                    if c == 0 {
                        continue;
                    }
                    let shift = dot(&atom.eval_exponents(n, k)?, point).ok_or_else(overflow)?;
                    if shift + (left.len() + right.len()) as u64 > DENSE_LIMIT {
                        return Err(overflow());
                    }
                    mul_into(&mut acc, &left, &right, c, shift as usize)?;
                }
            }
        }
        while acc.len() > 1 && acc.last() == Some(&0) {
            acc.pop();
        }
        let v = Rc::new(acc);
        self.memo.insert((m, point.to_vec()), v.clone());
        Ok(v)
    }
}

fn applies(spec: &FuncRecSpec) -> bool {
    spec.terms.iter().all(|t| {
        t.left.iter().chain(&t.right).all(|i| i.unit_monomial().is_some())
            && t.coef.iter().all(|a| !a.coef.is_negative() && a.coef.is_integer())
    })
}

/// Full polynomials `Q_n` with every variable except `keep` set to 1.
///
/// Monomial substitutions send points `x_i = y^{p_i}` to points of the same
/// shape, so `Q_m` is tracked only at the points the recursion reaches. Specs
/// with non-monomial images or non-integral coefficients go through
/// [`eval_full`](super::eval_full) and specialization instead.
pub fn eval_marginal(spec: &FuncRecSpec, n_max: usize, keep: &str) -> Result<EnumeratorSequence> {
    let idx = spec
        .variables
        .iter()
        .position(|v| v == keep)
        .ok_or_else(|| usage(format!("unknown variable {keep:?}; the recurrence has {:?}", spec.variables)))?;
    if n_max > FULL_MODE_LIMIT {
        return Err(Error::Config(format!("n = {n_max} exceeds the full-mode limit {FULL_MODE_LIMIT}")));
    }
    let fallback = || {
        let drop: Vec<&str> = spec.variables.iter().filter(|v| *v != keep).map(|s| s.as_str()).collect();
        eval_full_with_limit(spec, n_max, FULL_MODE_LIMIT)?.specialize(&drop)
    };
    if spec.nvars() == 1 || !applies(spec) {
        return fallback();
    }
    let point: Vec<u64> = (0..spec.nvars()).map(|i| (i == idx) as u64).collect();
    let mut engine = Marginal { spec, memo: HashMap::new() };
    let vars = var_list(&[keep]);
    let mut values = Vec::with_capacity(n_max + 1);
    for m in 0..=n_max {
        let dense = match engine.value(m, &point) {
            Ok(d) => d,
            Err(Error::Config(_)) => return fallback(),
            Err(e) => return Err(e),
        };
        let mut p = MultiPoly::zero(vars.clone());
        for (e, &c) in dense.iter().enumerate() {
            if c != 0 {
                p.add_term(Monomial::from_slice(&[e as u32]), Rational::from_integer(BigInt::from(c)));
            }
        }
        values.push(p);
    }
    Ok(EnumeratorSequence {
        spec_name: spec.name.clone(),
        variables: vec![keep.to_string()],
        mode: Mode::Full,
        values: Values::Full(values),
    })
}
