use super::spec::{Atom, FuncRecSpec, Image, RecTerm};
use crate::arith::IndexPoly;
use crate::error::{usage, Result};
use crate::perm::{Family, Pattern};

fn ip(s: &str) -> IndexPoly {
    s.parse().expect("catalog exponent parses")
}

fn exps(list: &[&str]) -> Vec<IndexPoly> {
    list.iter().map(|s| ip(s)).collect()
}

fn mono(list: &[&str]) -> Vec<Atom> {
    vec![Atom::monomial(exps(list))]
}

fn images(list: &[&[&str]]) -> Vec<Image> {
    list.iter().map(|e| Image::monomial(exps(e))).collect()
}

fn term(k_low: u32, k_high: Option<u32>, coef: &[&str], left: &[&[&str]], right: &[&[&str]]) -> RecTerm {
    RecTerm { k_low, k_high, coef: mono(coef), left: images(left), right: images(right) }
}

fn vars(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Statistics with a built-in recurrence, per family.
pub fn catalog() -> Vec<(Family, &'static str)> {
    let mut out: Vec<(Family, &'static str)> =
        ["12", "21", "123", "132", "213", "231", "312", "321"].into_iter().map(|s| (Family::Av132, s)).collect();
    out.push((Family::Av123, "213"));
    out
}

fn supported() -> String {
    catalog().iter().map(|(f, s)| format!("{f}/{s}")).collect::<Vec<_>>().join(", ")
}

/// The built-in recurrence tracking occurrences of `stat` in `family`.
pub fn builtin_spec(family: Family, stat: &Pattern) -> Result<FuncRecSpec> {
    let key = stat.compact();
    let name = format!("{family}/{key}");
    const T: &[&str] = &["1", "0"];
    const Q: &[&str] = &["0", "1"];
    let tq = vars(&["t", "q"]);
    let spec = match (family, key.as_str()) {
        (Family::Av132, "21") => FuncRecSpec {
            name,
            variables: vars(&["t"]),
            terms: vec![term(1, None, &["k*(n-k)"], &[&["1"]], &[&["1"]])],
        },
        (Family::Av132, "12") => FuncRecSpec {
            name,
            variables: vars(&["t"]),
            terms: vec![term(1, None, &["k-1"], &[&["1"]], &[&["1"]])],
        },
        (Family::Av132, "132") => FuncRecSpec {
            name,
            variables: vars(&["t"]),
            terms: vec![term(1, None, &["0"], &[&["1"]], &[&["1"]])],
        },
        (Family::Av132, "231") => FuncRecSpec {
            name,
            variables: tq,
            terms: vec![term(1, None, &["(k-1)*(n-k)", "k-1"], &[T, &["n-k", "1"]], &[T, Q])],
        },
        (Family::Av132, "123") => FuncRecSpec {
            name,
            variables: tq,
            terms: vec![term(1, None, &["0", "k-1"], &[T, &["1", "1"]], &[T, Q])],
        },
        (Family::Av132, "321") => FuncRecSpec {
            name,
            variables: tq,
            terms: vec![term(1, None, &["0", "k*(n-k)"], &[T, &["n-k", "1"]], &[T, &["k", "1"]])],
        },
        (Family::Av132, "213") => FuncRecSpec {
            name,
            variables: tq,
            terms: vec![term(1, None, &["0", "k*(n-k)"], &[T, &["1", "1"]], &[T, Q])],
        },
        (Family::Av132, "312") => FuncRecSpec {
            name,
            variables: tq,
            terms: vec![term(1, None, &["0", "k-1"], &[T, Q], &[T, &["k", "1"]])],
        },
        (Family::Av123, "213") => {
            const TT: &[&str] = &["1", "0", "0"];
            const S1: &[&str] = &["0", "1", "0"];
            const S2: &[&str] = &["0", "0", "1"];
            FuncRecSpec {
                name,
                variables: vars(&["t", "s1", "s2"]),
                terms: vec![
                    term(1, Some(1), &["0", "0", "1"], &[TT, S1, S2], &[TT, S1, S2]),
                    term(2, None, &["0", "0", "0"], &[TT, &["1", "1", "0"], &["0", "1", "1"]], &[TT, S1, S2]),
                ],
            }
        }
        _ => {
            return Err(usage(format!(
                "no built-in recurrence for pattern {stat} in {family}; supported: {}",
                supported()
            )))
        }
    };
    spec.validate()?;
    Ok(spec)
}
