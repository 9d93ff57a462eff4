use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;

fn content(row: &[BigInt]) -> BigInt {
    row.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn make_primitive(row: &mut [BigInt]) {
    let g = content(row);
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Clears denominators and content of a rational row.
pub fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    make_primitive(&mut out);
    out
}

/// Integer basis of the right nullspace of `rows` (each `ncols` wide),
/// by fraction-free Gauss-Jordan elimination with content removal.
/// Every vector is primitive with its last nonzero entry positive.
pub fn nullspace(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(pr) = (r..m.len()).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].bits()) else {
            continue;
        };
        m.swap(r, pr);
        let pivot_row = m[r].clone();
        let p = pivot_row[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let e = row[c].clone();
            let g = p.gcd(&e);
            let (a, b) = (&p / &g, &e / &g);
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &a * &*x - &b * y;
            }
            make_primitive(row);
        }
        pivots.push((r, c));
        r += 1;
    }
    let pivot_cols: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &(_, c) in &pivots {
            v[c] = true;
        }
        v
    };
    let mut out = Vec::new();
    for f in (0..ncols).filter(|&c| !pivot_cols[c]) {
        let mut v = vec![Rational::zero(); ncols];
        v[f] = Rational::one();
        for &(row, c) in &pivots {
            v[c] = -Rational::new(m[row][f].clone(), m[row][c].clone());
        }
        out.push(normalize(integer_row(&v)));
    }
    out
}

/// Sign convention: last nonzero entry positive.
pub fn normalize(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if v.iter().rev().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
    v
}

/// `a * x^0 + b * x + ...` with integer coefficients, e.g. `4n + 2`.
pub fn render_univariate(coeffs: &[BigInt], var: &str) -> String {
    let mut parts: Vec<(bool, String)> = Vec::new();
    for (e, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let body = match e {
            0 => mag.to_string(),
            _ => {
                let pow = if e == 1 { var.to_string() } else { format!("{var}^{e}") };
                if mag.is_one() {
                    pow
                } else {
                    format!("{mag}{pow}")
                }
            }
        };
        parts.push((c.is_negative(), body));
    }
    join_signed(parts)
}

pub fn join_signed(parts: Vec<(bool, String)>) -> String {
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (neg, body)) in parts.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => s.push_str(&format!("-{body}")),
            (0, false) => s.push_str(&body),
            (_, true) => s.push_str(&format!(" - {body}")),
            (_, false) => s.push_str(&format!(" + {body}")),
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_nullspace() {
        let rows = vec![ints(&[1, 2, 3]), ints(&[2, 4, 6])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot: BigInt = rows[0].iter().zip(v).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
        assert!(nullspace(&[ints(&[1, 0]), ints(&[0, 1])], 2).is_empty());
        assert_eq!(nullspace(&[ints(&[3, -6])], 2), vec![ints(&[2, 1])]);
    }

    #[test]
    fn rendering() {
        assert_eq!(render_univariate(&ints(&[2, 4]), "n"), "4n + 2");
        assert_eq!(render_univariate(&ints(&[-2, 0, -1]), "n"), "-n^2 - 2");
        assert_eq!(render_univariate(&ints(&[]), "n"), "0");
    }
}
