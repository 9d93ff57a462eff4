use std::sync::OnceLock;

use catstat_core::arith::{binomial, var_list, IndexPoly, MultiPoly, Rational, SeriesLayout, TruncatedSeries};
use catstat_core::census::{split_decompose, AverageEngine};
use catstat_core::guess::{guess_p_recursive, Sequence};
use catstat_core::moments::MomentTable;
use catstat_core::perm::{compose_132, count_occurrences, decompose_132, enumerate_avoiders, standardize};
use catstat_core::Permutation;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..20).prop_map(|(a, b)| Rational::new(BigInt::from(a), BigInt::from(b)))
}

fn poly_with(max_exp: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((rational(), prop::collection::vec(0..=max_exp, 2)), 0..=max_terms)
        .prop_map(|terms| MultiPoly::from_terms(var_list(&["x", "y"]), terms).unwrap())
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    poly_with(3, 5)
}

fn small_poly() -> impl Strategy<Value = MultiPoly> {
    poly_with(2, 3)
}

fn permutation(max_len: usize) -> impl Strategy<Value = Permutation> {
    (0..=max_len).prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn avoiders_132() -> &'static Vec<Vec<Permutation>> {
    static CELL: OnceLock<Vec<Vec<Permutation>>> = OnceLock::new();
    CELL.get_or_init(|| (0..=10).map(|n| enumerate_avoiders(&"132".parse().unwrap(), n).unwrap()).collect())
}

fn avoider_132() -> impl Strategy<Value = Permutation> {
    (1usize..=10, any::<prop::sample::Index>()).prop_map(|(n, i)| i.get(&avoiders_132()[n]).clone())
}

proptest! {
    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.recip()).is_one());
        }
        let s = a.to_string();
        prop_assert_eq!(s.parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn polynomial_ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
        prop_assert_eq!(p.mul(&q).unwrap().mul(&r).unwrap(), p.mul(&q.mul(&r).unwrap()).unwrap());
        prop_assert_eq!(p.mul(&q.add(&r).unwrap()).unwrap(), p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap());
        prop_assert!(p.sub(&p).unwrap().is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(), q in poly(), x in rational(), y in rational()) {
        let pt = [x, y];
        let lhs = p.mul(&q).unwrap().eval(&pt).unwrap();
        prop_assert_eq!(lhs, &p.eval(&pt).unwrap() * &q.eval(&pt).unwrap());
    }

    #[test]
    fn substitution_composes(p in small_poly(), a in small_poly(), b in small_poly(), c in small_poly(), d in small_poly()) {
        // p(a, b) at (c, d) equals p(a(c, d), b(c, d))
        let inner = [a.clone(), b.clone()];
        let outer = [c.clone(), d.clone()];
        let lhs = p.subst(&inner).unwrap().subst(&outer).unwrap();
        let rhs = p.subst(&[a.subst(&outer).unwrap(), b.subst(&outer).unwrap()]).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncated_product_matches_polynomial_product(p in poly(), q in poly(), cap in 1u32..6) {
        let layout = SeriesLayout::new(&["x", "y"], cap);
        let sp = TruncatedSeries::from_poly(&layout, &p).unwrap();
        let sq = TruncatedSeries::from_poly(&layout, &q).unwrap();
        let want = TruncatedSeries::from_poly(&layout, &p.mul(&q).unwrap()).unwrap();
        prop_assert_eq!(sp.mul(&sq).unwrap(), want);
    }

    #[test]
    fn binomial_series_add_exponents(e in 0i64..30, f in 0i64..30, cap in 1u32..8) {
        let layout = SeriesLayout::new(&["d"], cap);
        let a = TruncatedSeries::binomial(&layout, 0, &BigInt::from(e));
        let b = TruncatedSeries::binomial(&layout, 0, &BigInt::from(f));
        prop_assert_eq!(a.mul(&b).unwrap(), TruncatedSeries::binomial(&layout, 0, &BigInt::from(e + f)));
    }

    #[test]
    fn pascal_rule(n in 1u64..60, k in 1u64..60) {
        prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
    }

    #[test]
    fn index_poly_round_trip(c in -5i64..5, a in 0u32..3, b in 0u32..3, d in -5i64..5, n in 0u64..20, k in 0u64..20) {
        let op = if d < 0 { '-' } else { '+' };
        let p: IndexPoly = format!("{c}*n^{a}*k^{b} {op} {}*k", d.abs()).parse().unwrap();
        let back: IndexPoly = p.to_string().parse().unwrap();
        prop_assert_eq!(&back, &p);
        let want = BigInt::from(c) * BigInt::from(n).pow(a) * BigInt::from(k).pow(b) + BigInt::from(d) * BigInt::from(k);
        prop_assert_eq!(p.eval(n, k), want);
    }

    #[test]
    fn permutation_basics(pi in permutation(9)) {
        prop_assert_eq!(pi.inverse().inverse(), pi.clone());
        prop_assert_eq!(standardize(pi.entries()).unwrap(), pi.clone());
        prop_assert_eq!(count_occurrences(&pi, &pi), 1);
        let s = pi.compact();
        if !s.is_empty() {
            prop_assert_eq!(s.parse::<Permutation>().unwrap(), pi);
        }
    }

    #[test]
    fn occurrences_of_all_k_patterns_sum_to_binomial(pi in permutation(8), k in 1usize..=4) {
        let total: u64 = Permutation::all(k).iter().map(|p| count_occurrences(p, &pi)).sum();
        prop_assert_eq!(BigInt::from(total), binomial(pi.len() as u64, k as u64));
    }

    #[test]
    fn decomposition_round_trip(pi in avoider_132()) {
        let (k, pi1, pi2) = decompose_132(&pi).unwrap();
        prop_assert_eq!(pi1.len() + pi2.len() + 1, pi.len());
        prop_assert_eq!(pi.entries()[k - 1] as usize, pi.len());
        prop_assert_eq!(compose_132(&pi1, &pi2), pi);
    }

    #[test]
    fn pointwise_split_identity(pi in avoider_132(), pat in permutation(5)) {
        prop_assume!(!pat.is_empty());
        let (_, pi1, pi2) = decompose_132(&pi).unwrap();
        let total: u64 = split_decompose(&pat)
            .terms
            .iter()
            .map(|t| count_occurrences(&t.prefix, &pi1) * count_occurrences(&t.suffix, &pi2))
            .sum();
        prop_assert_eq!(total, count_occurrences(&pat, &pi));
    }

    #[test]
    fn average_engine_matches_brute_force(pat in permutation(5), n in 0usize..=8) {
        prop_assume!(!pat.is_empty());
        let engine = AverageEngine::<u128>::new(std::slice::from_ref(&pat), 8).unwrap();
        let brute: u64 = avoiders_132()[n].iter().map(|pi| count_occurrences(&pat, pi)).sum();
        prop_assert_eq!(engine.values(&pat).unwrap()[n], brute as u128);
    }

    #[test]
    fn moments_of_random_distributions(weights in prop::collection::vec(0u32..6, 2..9)) {
        prop_assume!(weights.iter().filter(|&&w| w > 0).count() >= 2);
        // f_r = sum_i w_i * i(i-1)...(i-r+1)
        let f: Vec<Rational> = (0..=6u32)
            .map(|r| {
                weights.iter().enumerate().map(|(i, &w)| {
                    let falling: i64 = (0..r as i64).map(|j| i as i64 - j).product();
                    Rational::from(w as i64 * falling)
                }).sum()
            })
            .collect();
        let table = MomentTable::from_factorial("w", vec![f]).unwrap();
        let row = &table.rows[0];
        prop_assert!(row.central[1].is_zero());
        let a2 = &row.alpha(2).unwrap().signed_square;
        prop_assert!(a2.is_one());
        let a3 = row.alpha(3).unwrap().signed_square.abs();
        let a4 = row.alpha(4).unwrap().signed_square.clone();
        prop_assert!(a4 >= &a3 + &Rational::one());
        prop_assert!(!row.variance().unwrap().is_negative());
    }

    #[test]
    fn first_order_recurrences_are_found(a in 1i64..4, b in 1i64..4, c in 1i64..4) {
        // (n + c) x(n+1) = (a n + b) x(n)
        let mut x = vec![Rational::one()];
        for n in 0..40i64 {
            let next = &(&x[n as usize] * &Rational::from(a * n + b)) / &Rational::from(n + c);
            x.push(next);
        }
        let r = guess_p_recursive(&Sequence::new("x", 0, x), 2, 2, 10).unwrap().unwrap();
        prop_assert_eq!(r.order, 1);
        prop_assert!(r.degree <= 1);
    }
}
