use super::*;

fn p(s: &str) -> Pattern {
    s.parse().unwrap()
}

#[test]
fn richardson_on_constructed_samples() {
    let s: Vec<(f64, f64)> = [50.0, 100.0, 150.0, 200.0].iter().map(|&n| (n, 1.0 + 1.0 / n)).collect();
    let (est, metric) = limit_estimate(&s, &[1.0]).unwrap();
    assert!((est - 1.0).abs() < 1e-3);
    assert!(metric < 1e-9);
    let c: Vec<(f64, f64)> = (1..=5).map(|n| (n as f64 * 10.0, 2.5)).collect();
    assert_eq!(limit_estimate(&c, &[0.5, 1.0]).unwrap(), (2.5, 0.0));
    assert!(limit_estimate(&s[..3], &[1.0]).is_err());
    assert!(limit_estimate(&s, &[0.5, 1.0]).is_err());
}

#[test]
fn two_term_model() {
    let s: Vec<(f64, f64)> = (0..7).map(|j| 140.0 + 10.0 * j as f64).map(|n: f64| (n, 0.3 + 2.0 / n.sqrt() - 5.0 / n)).collect();
    let (est, metric) = limit_estimate(&s, &[0.5, 1.0]).unwrap();
    assert!((est - 0.3).abs() < 1e-9 && metric < 1e-9);
}

#[test]
fn inversions_are_abnormal() {
    let r = analyze(Family::Av132, &p("21"), 100, 4, &Tolerances::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Abnormal);
    let b3 = r.limit(3).unwrap();
    assert!(b3.estimate.abs() > 0.02 && b3.metric < 1e-2);
    assert_eq!(r.provenance.checkpoints, vec![50, 75, 90, 100]);
}

#[test]
fn verdict_is_rederivable() {
    let r = analyze(Family::Av132, &p("231"), 60, 4, &Tolerances::default()).unwrap();
    let back: AbnormalityReport = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(verdict(&back.moments, &back.provenance.tolerances), (r.verdict, r.reason.clone()));
}

#[test]
fn samples_are_exact_across_ranges() {
    let a = analyze(Family::Av132, &p("123"), 60, 4, &Tolerances::default()).unwrap();
    let b = analyze(Family::Av132, &p("123"), 120, 4, &Tolerances::default()).unwrap();
    let at = |r: &AbnormalityReport, n: usize| r.limit(3).unwrap().samples.iter().find(|s| s.n == n).cloned();
    assert_eq!(at(&a, 60), at(&b, 60));
}

#[test]
fn binomial_control_stays_inconclusive() {
    let r = analyze_binomial_control(100, 4, &Tolerances::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
    assert!(r.limit(3).unwrap().estimate.abs() < 1e-9);
    assert!((r.limit(4).unwrap().estimate - 3.0).abs() < 1e-3);
}

#[test]
fn preconditions() {
    let tol = Tolerances::default();
    assert!(analyze(Family::Av132, &p("21"), 40, 4, &tol).is_err());
    assert!(analyze(Family::Av132, &p("21"), 60, 3, &tol).is_err());
    assert!(matches!(analyze(Family::Av132, &p("132"), 60, 4, &tol), Err(Error::Degenerate { .. })));
}

#[test]
fn recurrence_certificates() {
    let spec = builtin_spec(Family::Av132, &p("21")).unwrap();
    let table = crate::moments::moments_from_truncated(&eval_truncated(&spec, 60, 2).unwrap(), 2).unwrap();
    let certs = certificates(&table, 60, 4, 4).unwrap();
    assert_eq!(certs.iter().map(|c| c.r).collect::<Vec<_>>(), vec![1, 2]);
}
