use std::collections::{BTreeSet, HashMap};
use std::ops::{AddAssign, Mul};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::split::{split_decompose, SplitDecomposition};
use crate::arith::catalan_table;
use crate::perm::Pattern;

/// `A_p(0..=N)`: total occurrences of `p` over `AV132(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AverageSequence {
    pub pattern: Pattern,
    #[serde(with = "crate::serde_util::big_vec")]
    pub values: Vec<BigUint>,
}

/// Integer type for the split recurrence.
pub trait Count: Clone + Zero + AddAssign + Mul<Output = Self> + Send + Sync {
    fn from_catalan(c: &BigUint) -> Option<Self>;
}

impl Count for BigUint {
    fn from_catalan(c: &BigUint) -> Option<Self> {
        Some(c.clone())
    }
}

impl Count for u128 {
    fn from_catalan(c: &BigUint) -> Option<Self> {
        u128::try_from(c).ok()
    }
}

/// Memoized `A_p(n)` over the closure of a pattern set under splitting.
pub struct AverageEngine<T: Count> {
    n_max: usize,
    index: HashMap<Pattern, usize>,
    values: Vec<Vec<T>>,
}

/// Compiled split term: memo indices of prefix and suffix.
type Compiled = Vec<(usize, usize)>;

impl<T: Count> AverageEngine<T> {
    /// Computes `A_p(0..=n_max)` for every pattern in `roots` and all of
    /// their split descendants. `None` when `T` cannot hold the Catalan numbers.
    pub fn new(roots: &[Pattern], n_max: usize) -> Option<Self> {
        let mut closure: BTreeSet<Pattern> = BTreeSet::new();
        let mut stack: Vec<Pattern> = roots.to_vec();
        stack.push(Pattern::empty());
        let mut decomps: HashMap<Pattern, SplitDecomposition> = HashMap::new();
        while let Some(p) = stack.pop() {
            if !closure.insert(p.clone()) {
                continue;
            }
            if p.is_empty() {
                continue;
            }
            let d = split_decompose(&p);
            for t in &d.terms {
                for q in [&t.prefix, &t.suffix] {
                    if !closure.contains(q) {
                        stack.push(q.clone());
                    }
                }
            }
            decomps.insert(p, d);
        }
        // Shorter patterns first, so the empty pattern has index 0.
        let mut order: Vec<Pattern> = closure.into_iter().collect();
        order.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let index: HashMap<Pattern, usize> = order.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let compiled: Vec<Compiled> = order
            .iter()
            .map(|p| match decomps.get(p) {
                Some(d) => d.terms.iter().map(|t| (index[&t.prefix], index[&t.suffix])).collect(),
                None => Vec::new(),
            })
            .collect();

        let catalan: Vec<T> = catalan_table(n_max)
            .iter()
            .map(|c| T::from_catalan(&c.to_biguint().expect("Catalan numbers are positive")))
            .collect::<Option<_>>()?;
        let mut values: Vec<Vec<T>> = vec![Vec::with_capacity(n_max + 1); order.len()];
        values[0] = catalan;
        for n in 0..=n_max {
            for (pi, terms) in compiled.iter().enumerate().skip(1) {
                let mut acc = T::zero();
                for &(a, b) in terms {
                    for k in 1..=n {
                        let x = &values[a][k - 1];
                        let y = &values[b][n - k];
                        if !x.is_zero() && !y.is_zero() {
                            acc += x.clone() * y.clone();
                        }
                    }
                }
                values[pi].push(acc);
            }
        }
        Some(AverageEngine { n_max, index, values })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of patterns in the memo table.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self, p: &Pattern) -> Option<&[T]> {
        self.index.get(p).map(|&i| self.values[i].as_slice())
    }
}

/// `A_p(0..=n_max)` via the split recurrence.
pub fn average_sequence(p: &Pattern, n_max: usize) -> AverageSequence {
    let engine = AverageEngine::<BigUint>::new(std::slice::from_ref(p), n_max).expect("BigUint holds everything");
    AverageSequence { pattern: p.clone(), values: engine.values(p).expect("root is in the closure").to_vec() }
}
