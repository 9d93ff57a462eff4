use num_bigint::BigUint;

use super::*;
use crate::arith::{binomial, catalan_table, Rational};
use crate::funceq::{builtin_spec, eval_truncated};
use crate::perm::{count_occurrences, decompose_132, enumerate_avoiders, Family, Pattern, Permutation};

fn p(s: &str) -> Pattern {
    s.parse().unwrap()
}

fn term(a: &str, b: &str, m: bool) -> SplitTerm {
    SplitTerm { prefix: p(a), suffix: p(b), uses_max: m }
}

fn nums(v: &[u64]) -> Vec<BigUint> {
    v.iter().map(|&x| BigUint::from(x)).collect()
}

#[test]
fn splits_of_small_patterns() {
    let mut got = split_decompose(&p("21")).terms;
    got.sort();
    let mut want = vec![term("21", "", false), term("", "21", false), term("1", "1", false), term("", "1", true)];
    want.sort();
    assert_eq!(got, want);

    let mut got = split_decompose(&p("4321")).terms;
    got.sort();
    let mut want = vec![
        term("4321", "", false),
        term("", "4321", false),
        term("1", "321", false),
        term("", "321", true),
        term("321", "1", false),
        term("21", "21", false),
    ];
    want.sort();
    assert_eq!(got, want);

    let mut got = split_decompose(&p("132")).terms;
    got.sort();
    let mut want = vec![term("132", "", false), term("", "132", false)];
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn inversion_totals() {
    assert_eq!(average_sequence(&p("21"), 3).values, nums(&[0, 0, 1, 8]));
    assert!(average_sequence(&p("132"), 12).values.iter().all(|v| v == &BigUint::from(0u32)));
}

#[test]
fn length_three_coincidence() {
    let a = average_sequence(&p("213"), 20).values;
    assert_eq!(a, average_sequence(&p("231"), 20).values);
    assert_eq!(a, average_sequence(&p("312"), 20).values);
}

fn brute_total(pat: &Pattern, n: usize) -> u64 {
    enumerate_avoiders(&p("132"), n).unwrap().iter().map(|pi| count_occurrences(pat, pi)).sum()
}

#[test]
fn oracle_equivalence() {
    for len in 1..=4 {
        let engine = AverageEngine::<u128>::new(&Permutation::all(len), 9).unwrap();
        for pat in Permutation::all(len) {
            let v = engine.values(&pat).unwrap();
            for n in 0..=9 {
                assert_eq!(v[n] as u64, brute_total(&pat, n), "{pat} at n = {n}");
            }
        }
    }
}

#[test]
fn pointwise_split_identity() {
    let pats: Vec<Pattern> = (1..=4).flat_map(Permutation::all).collect();
    for n in 1..=8 {
        for pi in enumerate_avoiders(&p("132"), n).unwrap() {
            let (_, pi1, pi2) = decompose_132(&pi).unwrap();
            for pat in &pats {
                let total: u64 = split_decompose(pat)
                    .terms
                    .iter()
                    .map(|t| count_occurrences(&t.prefix, &pi1) * count_occurrences(&t.suffix, &pi2))
                    .sum();
                assert_eq!(total, count_occurrences(pat, &pi), "{pat} in {pi}");
            }
        }
    }
}

#[test]
fn mass_identity() {
    let cat = catalan_table(10);
    for k in 1..=4 {
        let all = Permutation::all(k);
        let engine = AverageEngine::<BigUint>::new(&all, 10).unwrap();
        for n in 0..=10 {
            let total: BigUint = all.iter().map(|q| engine.values(q).unwrap()[n].clone()).sum();
            let want = binomial(n as u64, k as u64) * &cat[n];
            assert_eq!(total, want.to_biguint().unwrap());
        }
    }
}

#[test]
fn inversions_agree_with_first_moment() {
    let spec = builtin_spec(Family::Av132, &p("21")).unwrap();
    let seq = eval_truncated(&spec, 20, 1).unwrap();
    let a = average_sequence(&p("21"), 20).values;
    for (n, s) in seq.truncated().unwrap().iter().enumerate() {
        let v = Rational::from_integer(a[n].clone().into());
        assert_eq!(s.coeff(&[1]), v);
    }
}

#[test]
fn census_small() {
    let c = bona_census_132(3, 30).unwrap();
    let groups: Vec<Vec<String>> =
        c.classes.iter().map(|cl| cl.members.iter().map(|m| m.compact()).collect()).collect();
    assert_eq!(groups, vec![vec!["123"], vec!["213", "231", "312"], vec!["321"]]);
    assert_eq!(bona_census_132(1, 30).unwrap().class_count(), 1);
    assert!(bona_census_132(3, 5).is_err());
}

#[test]
fn census_stable_in_prefix() {
    for k in 1..=6 {
        let short = bona_census_132(k, 2 * k).unwrap();
        let long = bona_census_132(k, 30).unwrap();
        let members = |c: &Census| c.classes.iter().map(|cl| cl.members.clone()).collect::<Vec<_>>();
        assert_eq!(members(&short), members(&long), "k = {k}");
    }
}

#[test]
fn census_123_small() {
    for (k, want) in [(1, 1), (2, 2), (3, 3), (4, 6)] {
        assert_eq!(bona_census_123(k, 9).unwrap().class_count(), want, "k = {k}");
    }
    assert!(bona_census_123(3, 13).is_err());
}

#[test]
fn partitions() {
    assert_eq!(partition_numbers(1), BigUint::from(1u32));
    assert_eq!(partition_numbers(6), BigUint::from(11u32));
    assert_eq!(partition_numbers(10), BigUint::from(42u32));
    assert_eq!(partition_numbers(0), BigUint::from(1u32));
}

#[test]
fn report_json() {
    let r = CensusReport::new(&bona_census_132(3, 30).unwrap());
    let j = serde_json::to_value(&r).unwrap();
    assert_eq!(j["class_count"], 3);
    assert_eq!(j["expected"], "3");
    assert_eq!(j["match"], true);
    assert_eq!(j["classes"][0]["representative"], "1 2 3");
    assert_eq!(j["classes"][0]["values"].as_array().unwrap().len(), REPORT_VALUES);
}
