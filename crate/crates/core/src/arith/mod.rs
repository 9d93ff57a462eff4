//! Exact arithmetic: rationals, sparse polynomials, truncated series and
//! integer polynomials in the summation indices.

mod index_poly;
mod poly;
mod rational;
mod series;

pub use index_poly::IndexPoly;
pub use poly::{var_list, Monomial, MultiPoly, PolyWire, VarList, EXPONENT_LIMIT};
pub use rational::Rational;
pub use series::{binomial_series, SeriesLayout, SeriesWire, Substitution, TruncatedSeries};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Catalan numbers `c_0..=c_n` by the convolution recurrence.
pub fn catalan_table(n: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for m in 1..=n {
        let mut s = BigInt::zero();
        for k in 1..=m {
            s += &c[k - 1] * &c[m - k];
        }
        c.push(s);
    }
    c
}

/// Binomial coefficient `C(n, k)` for machine-size arguments.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for j in 0..k {
        c = c * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    c
}
