//! End-to-end acceptance checks, one line per criterion.
//!
//! Run with `cargo test -p catstat-core --test acceptance`.

use std::time::Instant;

use catstat_core::abnormal::{analyze, analyze_binomial_control, Tolerances, Verdict};
use catstat_core::arith::{binomial, catalan_table};
use catstat_core::census::{self, split_decompose, AverageEngine};
use catstat_core::checks;
use catstat_core::funceq::{builtin_spec, catalog, eval_full, eval_truncated};
use catstat_core::guess::{guess_algebraic, guess_p_recursive, Sequence};
use catstat_core::moments::{moments_from_full, moments_from_truncated};
use catstat_core::perm::{count_occurrences, decompose_132, enumerate_avoiders};
use catstat_core::{Family, Pattern, Permutation, Rational};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn p(s: &str) -> Pattern {
    s.parse().unwrap()
}

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(x: impl std::fmt::Display) -> String {
    x.to_string()
}

fn catalan_sanity() -> Outcome {
    let start = Instant::now();
    let c = checks::catalan_masses(60).map_err(e)?;
    let secs = start.elapsed().as_secs_f64();
    ensure(c.passed, || c.detail.clone())?;
    ensure(secs < 1.0, || format!("took {secs:.2} s"))?;
    Ok(format!("{}, {secs:.2} s", c.detail))
}

fn oracle_equivalence() -> Outcome {
    let results = checks::catalog_vs_brute(10).map_err(e)?;
    let bad: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| format!("{}: {}", r.name, r.detail)).collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    Ok(format!("{} statistics, n <= 10", results.len()))
}

fn census_132() -> Outcome {
    let want = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
    let mut got = Vec::new();
    for k in 1..=10 {
        got.push(census::bona_census_132(k, census::DEFAULT_PREFIX_LEN).map_err(e)?.class_count());
    }
    ensure(got == want, || format!("got {got:?}"))?;
    Ok(format!("k = 1..10: {got:?}"))
}

fn census_123() -> Outcome {
    let mut got = Vec::new();
    let mut fragile = Vec::new();
    for k in 1..=6 {
        let c = census::bona_census_123(k, 9).map_err(e)?;
        got.push(c.class_count());
        for (a, b) in c.fragile_pairs() {
            fragile.push(format!("{}~{}", a.compact(), b.compact()));
        }
    }
    ensure(got.iter().map(|&c| c as u64).eq(census::PUBLISHED_123), || format!("got {got:?}; class pairs near the boundary: {fragile:?}"))?;
    Ok(format!("k = 1..6: {got:?}, n <= 9"))
}

fn closed_form_moments() -> Outcome {
    let spec = builtin_spec(Family::Av123, &p("213")).map_err(e)?;
    let t = moments_from_truncated(&eval_truncated(&spec, 30, 2).map_err(e)?, 2).map_err(e)?;
    let cat = catalan_table(30);
    for n in 1..=30usize {
        let c1 = Rational::from_integer(cat[n - 1].clone());
        let nn = Rational::from(n as i64);
        let four = Rational::from_integer(BigInt::from(4).pow(n as u32));
        let first = -q("3/8") * four.clone() + q("1/2") * (nn.clone() + q("2")) * (q("2") * nn.clone() - q("1")) * c1.clone();
        let cn = Rational::from_integer(cat[n].clone());
        ensure(&cn * &t.rows[n].raw[1] == first, || format!("first moment at n = {n}"))?;
        let quad = q("3") * nn.pow(2) + q("7") * nn.clone() + q("6");
        let poly = q("19/60") * nn.pow(4) + q("57/20") * nn.pow(3) + q("67/30") * nn.pow(2) + q("1/10") * nn.clone()
            - q("1");
        let second = -q("9/128") * quad * four + poly * c1;
        ensure(&cn * &t.rows[n].raw[2] == second, || format!("second moment at n = {n}"))?;
    }
    Ok("first and second raw moments exact for 1 <= n <= 30".into())
}

fn third_moment_recurrence() -> Outcome {
    let spec = builtin_spec(Family::Av123, &p("213")).map_err(e)?;
    let seq = eval_truncated(&spec, 35, 3).map_err(e)?;
    let f3: Vec<Rational> = seq.truncated().unwrap().iter().map(|s| &s.coeff(&[3, 0, 0]) * &q("6")).collect();
    let r = guess_p_recursive(&Sequence::new("f3", 0, f3), 4, 4, 6)
        .map_err(e)?
        .ok_or("no recurrence of order <= 4, degree <= 4")?;
    ensure((r.order, r.degree) == (4, 4), || format!("found order {}, degree {}", r.order, r.degree))?;
    Ok(format!("order {}, degree {}, 6 held-out terms", r.order, r.degree))
}

fn algebraic_guessing() -> Outcome {
    let cat: Vec<Rational> = catalan_table(89).into_iter().map(Rational::from_integer).collect();
    let eq = guess_algebraic(&cat, 4, 12, 20).map_err(e)?.ok_or("no equation for the Catalan series")?;
    ensure(eq.rendered == "1 - y + z*y^2", || format!("Catalan: {}", eq.rendered))?;
    let spec = builtin_spec(Family::Av132, &p("21")).map_err(e)?;
    let seq = eval_truncated(&spec, 89, 1).map_err(e)?;
    let f1: Vec<Rational> = seq.truncated().unwrap().iter().map(|s| s.coeff(&[1])).collect();
    let g = guess_algebraic(&f1, 4, 12, 20).map_err(e)?.ok_or("no equation for f1 of 21")?;
    ensure(g.deg_y == 2, || format!("f1 equation has degree {} in y", g.deg_y))?;
    ensure(g.residual(&f1, f1.len() - 1).iter().all(|x| x.is_zero()), || "f1 residual is nonzero".into())?;
    Ok(format!("{}; f1 of 21: deg_y 2, deg_z {}, 20 terms past the fit", eq.rendered, g.deg_z))
}

fn abnormality() -> Outcome {
    let tol = Tolerances::default();
    let mut lines = Vec::new();
    for (family, stat) in catalog() {
        if family != Family::Av132 || stat == "132" {
            continue;
        }
        let r = analyze(family, &p(stat), 200, 4, &tol).map_err(e)?;
        let b3 = r.limit(3).unwrap();
        let b4 = r.limit(4).unwrap();
        ensure(r.verdict == Verdict::Abnormal, || format!("{stat}: {}", r.reason))?;
        ensure(b3.metric < 1e-2 && b4.metric < 1e-2, || format!("{stat}: metric {:.2e}/{:.2e}", b3.metric, b4.metric))?;
        lines.push(format!("{stat} ({:.4}, {:.4})", b3.estimate, b4.estimate));
    }
    let c = analyze_binomial_control(200, 4, &tol).map_err(e)?;
    let (c3, c4) = (c.limit(3).unwrap().estimate, c.limit(4).unwrap().estimate);
    ensure(c.verdict == Verdict::Inconclusive, || format!("binomial control: {}", c.reason))?;
    ensure(c3.abs() < 1e-3 && (c4 - 3.0).abs() < 1e-3, || format!("binomial control limits {c3}, {c4}"))?;
    Ok(format!("{} abnormal at N = 200: {}; binomial control inconclusive ({c3:.4}, {c4:.4})", lines.len(), lines.join(", ")))
}

fn inverse_model_note() -> String {
    let tol = Tolerances::single_inverse_power();
    let mut abnormal = Vec::new();
    let mut other = Vec::new();
    for (family, stat) in catalog() {
        if family != Family::Av132 || stat == "132" {
            continue;
        }
        match analyze(family, &p(stat), 200, 4, &tol) {
            Ok(r) if r.verdict == Verdict::Abnormal => abnormal.push(stat),
            _ => other.push(stat),
        }
    }
    format!("single O(1/n) model: abnormal {abnormal:?}, inconclusive {other:?}")
}

fn split_identities() -> Outcome {
    let engine = AverageEngine::<BigUint>::new(&[p("213"), p("231"), p("312")], 20).ok_or("engine")?;
    let a = engine.values(&p("213")).unwrap();
    ensure(a == engine.values(&p("231")).unwrap() && a == engine.values(&p("312")).unwrap(), || {
        "A213, A231, A312 differ".into()
    })?;
    let pats: Vec<Pattern> = (1..=4).flat_map(Permutation::all).collect();
    let splits: Vec<_> = pats.iter().map(split_decompose).collect();
    for n in 1..=9 {
        for pi in enumerate_avoiders(&p("132"), n).map_err(e)? {
            let (_, pi1, pi2) = decompose_132(&pi).map_err(e)?;
            for (pat, s) in pats.iter().zip(&splits) {
                let total: u64 =
                    s.terms.iter().map(|t| count_occurrences(&t.prefix, &pi1) * count_occurrences(&t.suffix, &pi2)).sum();
                ensure(total == count_occurrences(pat, &pi), || format!("pointwise identity fails for {pat} in {pi}"))?;
            }
        }
    }
    let cat = catalan_table(10);
    for k in 1..=4 {
        let all = Permutation::all(k);
        let engine = AverageEngine::<BigUint>::new(&all, 10).ok_or("engine")?;
        for n in 0..=10 {
            let total: BigUint = all.iter().map(|x| engine.values(x).unwrap()[n].clone()).sum();
            let want = (binomial(n as u64, k as u64) * &cat[n]).to_biguint().unwrap();
            ensure(total == want, || format!("mass identity fails at k = {k}, n = {n}"))?;
        }
    }
    Ok("A213 = A231 = A312 for n <= 20; pointwise |p| <= 4, n <= 9; mass k <= 4, n <= 10".into())
}

fn moment_properties() -> Outcome {
    let mut count = 0;
    for (family, stat) in catalog() {
        let spec = builtin_spec(family, &p(stat)).map_err(e)?;
        let full = moments_from_full(&eval_full(&spec, 12).map_err(e)?, 6).map_err(e)?;
        let trunc = moments_from_truncated(&eval_truncated(&spec, 12, 6).map_err(e)?, 6).map_err(e)?;
        ensure(full.rows == trunc.rows, || format!("{family}/{stat}: full and truncated moments differ"))?;
        for row in &full.rows {
            ensure(row.central[1].is_zero(), || format!("{family}/{stat}: M1 != 0 at n = {}", row.n))?;
            if row.degenerate {
                continue;
            }
            let a = |r: u32| row.alpha(r).unwrap().signed_square.clone();
            ensure(a(2).is_one(), || format!("{family}/{stat}: alpha2 != 1 at n = {}", row.n))?;
            ensure(a(4) >= a(3).abs() + Rational::one(), || format!("{family}/{stat}: Pearson fails at n = {}", row.n))?;
            count += 1;
        }
    }
    Ok(format!("{} catalog statistics, n <= 12, r <= 6; {count} nondegenerate rows", catalog().len()))
}

fn u_map_validation() -> Outcome {
    let u = checks::u_map_readings(8);
    ensure(u.passed, || u.detail.clone())?;
    let s = checks::sigma_vs_recurrence(9).map_err(e)?;
    ensure(s.passed, || s.detail.clone())?;
    Ok(format!("{}; {}", u.detail, s.detail))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Catalan sanity", catalan_sanity),
        ("oracle equivalence", oracle_equivalence),
        ("Bona census, 132", census_132),
        ("Bona census, 123", census_123),
        ("closed-form moments", closed_form_moments),
        ("third-moment recurrence", third_moment_recurrence),
        ("algebraic guessing", algebraic_guessing),
        ("abnormality", abnormality),
        ("split identities", split_identities),
        ("moment properties", moment_properties),
        ("U map", u_map_validation),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match &outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.1} s]", i + 1)
            }
        }
        if i == 7 {
            println!("             info  {}", inverse_model_note());
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
