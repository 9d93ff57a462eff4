use super::*;
use crate::arith::{catalan_table, var_list};
use crate::funceq::{builtin_spec, catalog, eval_full, eval_truncated};
use crate::perm::{Family, Pattern};

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn p(s: &str) -> Pattern {
    s.parse().unwrap()
}

fn poly_t(coeffs: &[i64]) -> MultiPoly {
    MultiPoly::from_terms(var_list(&["t"]), coeffs.iter().enumerate().map(|(e, &c)| (Rational::from(c), vec![e as u32])))
        .unwrap()
}

#[test]
fn inversions_at_three() {
    let f = factorial_from_full(&[poly_t(&[1, 1, 2, 1])], 2).unwrap();
    assert_eq!(f[0], vec![q("5"), q("8"), q("10")]);
    let m = raw_from_factorial(&f[0]).unwrap();
    assert_eq!(m, vec![q("1"), q("8/5"), q("18/5")]);
    let c = central_from_raw(&m);
    assert_eq!(c, vec![q("1"), q("0"), q("26/25")]);
}

#[test]
fn constant_enumerator() {
    let f = factorial_from_full(&[poly_t(&[14])], 4).unwrap();
    assert!(f[0][1..].iter().all(|x| x.is_zero()));
    let m = raw_from_factorial(&f[0]).unwrap();
    assert!(m[1..].iter().all(|x| x.is_zero()));
    let c = central_from_raw(&m);
    assert!(c[1..].iter().all(|x| x.is_zero()));
}

#[test]
fn symmetric_two_point_has_zero_skew() {
    let f = factorial_from_full(&[poly_t(&[1, 0, 1])], 3).unwrap();
    let c = central_from_raw(&raw_from_factorial(&f[0]).unwrap());
    let a = standardized(&c, 0).unwrap();
    assert!(a[3].signed_square.is_zero());
    assert_eq!(a[2].exact, Some(q("1")));
}

#[test]
fn point_mass_is_degenerate() {
    let f = factorial_from_full(&[poly_t(&[0, 0, 0, 0, 0, 1])], 3).unwrap();
    let c = central_from_raw(&raw_from_factorial(&f[0]).unwrap());
    assert!(matches!(standardized(&c, 7), Err(Error::Degenerate { n: 7 })));
    let table = MomentTable::from_factorial("toy", f).unwrap();
    assert!(table.rows[0].degenerate);
}

#[test]
fn normal_reference() {
    let v: Vec<BigInt> = (3..=8).map(normal_moment).collect();
    assert_eq!(v, [0, 3, 0, 15, 0, 105].map(BigInt::from));
}

#[test]
fn stirling_numbers() {
    let s = stirling2_table(5);
    assert_eq!(s[5][2], BigInt::from(15));
    assert_eq!(s[4][2], BigInt::from(7));
}

#[test]
fn full_and_truncated_agree() {
    for (family, stat) in catalog() {
        let spec = builtin_spec(family, &p(stat)).unwrap();
        let a = moments_from_full(&eval_full(&spec, 12).unwrap(), 6).unwrap();
        let b = moments_from_truncated(&eval_truncated(&spec, 12, 6).unwrap(), 6).unwrap();
        assert_eq!(a, b, "{family}/{stat}");
    }
}

#[test]
fn truncation_cap_too_small() {
    let spec = builtin_spec(Family::Av132, &p("21")).unwrap();
    assert!(moments_from_truncated(&eval_truncated(&spec, 4, 2).unwrap(), 3).is_err());
}

#[test]
fn av123_mean_at_three() {
    let spec = builtin_spec(Family::Av123, &p("213")).unwrap();
    let t = moments_from_truncated(&eval_truncated(&spec, 3, 1).unwrap(), 1).unwrap();
    assert_eq!(t.rows[3].mean(), Some(&q("1/5")));
}

#[test]
fn av123_moment_closed_forms() {
    let spec = builtin_spec(Family::Av123, &p("213")).unwrap();
    let t = moments_from_truncated(&eval_truncated(&spec, 30, 2).unwrap(), 2).unwrap();
    let cat = catalan_table(30);
    for n in 1..=30usize {
        let c1 = Rational::from_integer(cat[n - 1].clone());
        let nn = Rational::from(n as i64);
        let four = Rational::from_integer(BigInt::from(4).pow(n as u32));
        let first = &(-q("3/8")) * &four + &(&(&q("1/2") * &(&nn + &q("2"))) * &(&(&q("2") * &nn) - &q("1"))) * &c1;
        let cn = Rational::from_integer(cat[n].clone());
        assert_eq!(&cn * &t.rows[n].raw[1], first, "first moment at n = {n}");
        let n2 = nn.pow(2);
        let quad = &(&(&q("3") * &n2) + &(&q("7") * &nn)) + &q("6");
        let poly = &q("19/60") * &nn.pow(4) + &q("57/20") * &nn.pow(3) + &q("67/30") * &n2 + &q("1/10") * &nn
            - q("1");
        let second = &(&(-q("9/128")) * &quad) * &four + &poly * &c1;
        assert_eq!(&cn * &t.rows[n].raw[2], second, "second moment at n = {n}");
    }
}

#[test]
fn pearson_and_jensen() {
    let spec = builtin_spec(Family::Av132, &p("231")).unwrap();
    let t = moments_from_truncated(&eval_truncated(&spec, 40, 4).unwrap(), 4).unwrap();
    for row in t.rows.iter().filter(|r| !r.degenerate) {
        assert!(row.raw[2] >= row.raw[1].pow(2));
        let a3sq = row.standardized[3].signed_square.abs();
        let a4 = row.standardized[4].exact.clone().unwrap();
        assert!(a4 >= &a3sq + &q("1"), "n = {}", row.n);
    }
}

#[test]
fn csv_and_json() {
    let spec = builtin_spec(Family::Av132, &p("21")).unwrap();
    let t = moments_from_truncated(&eval_truncated(&spec, 3, 2).unwrap(), 2).unwrap();
    let csv = t.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "n,c_n,f0,f1,f2,m0,m1,m2,M0,M1,M2,alpha_sq0,alpha_sq1,alpha_sq2,alpha0,alpha1,alpha2");
    assert_eq!(lines.nth(2).unwrap(), "2,2,2/1,1/1,0/1,1/1,1/2,1/2,1/1,0/1,1/4,1/1,0/1,1/1,1,0,1");
    let back: MomentTable = serde_json::from_str(&t.to_json()).unwrap();
    assert_eq!(back, t);
}
