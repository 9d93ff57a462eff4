use std::fmt::Write as _;
use std::path::PathBuf;

use catstat_core::abnormal::{self, AbnormalityReport, Tolerances};
use catstat_core::census::{self, CensusReport};
use catstat_core::checks::{self, CheckResult};
use catstat_core::funceq::{self, EnumeratorSequence, FuncRecSpec, Values};
use catstat_core::guess::{self, Sequence};
use catstat_core::moments::{self, format_float, MomentTable};
use catstat_core::perm::{count_occurrences, enumerate_avoiders, Family, Pattern, Permutation};
use catstat_core::{Error, Result};
use clap::{Args, Subcommand, ValueEnum};
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::Output;
use crate::{Command, EXIT_INTERNAL, EXIT_NOT_FOUND};

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Full,
    Truncated,
}

/// Selects a recurrence: a catalog entry or a spec file.
#[derive(Args, Debug, Serialize)]
pub struct SpecArgs {
    #[arg(long, default_value = "av132")]
    pub family: Family,
    /// Statistic pattern, e.g. 21 or 231.
    #[arg(long, default_value = "21")]
    pub stat: Pattern,
    /// JSON recurrence spec; overrides --family/--stat.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

impl SpecArgs {
    fn load(&self) -> Result<FuncRecSpec> {
        match &self.spec {
            Some(path) => FuncRecSpec::from_json(&read(path)?),
            None => funceq::builtin_spec(self.family, &self.stat),
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

#[derive(Args, Debug, Serialize)]
pub struct WenumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    /// Largest n.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Full)]
    pub mode: ModeArg,
    /// Truncation cap in truncated mode.
    #[arg(long, default_value_t = 4)]
    pub r: u32,
    /// Variables to keep (comma separated); the rest are set to 1. Default: all.
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
}

#[derive(Args, Debug, Serialize)]
pub struct MomentsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub max_n: usize,
    /// Highest moment order.
    #[arg(long, default_value_t = 4)]
    pub r: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Truncated)]
    pub mode: ModeArg,
}

#[derive(Args, Debug, Serialize)]
pub struct AverageArgs {
    #[arg(long)]
    pub pattern: Pattern,
    #[arg(long)]
    pub max_n: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct CensusArgs {
    #[arg(long, default_value = "av132")]
    pub family: Family,
    #[arg(long)]
    pub k: usize,
    /// Sequence prefix length compared (AV132).
    #[arg(long, default_value_t = census::DEFAULT_PREFIX_LEN)]
    pub prefix_len: usize,
    /// Largest brute-force n (AV123).
    #[arg(long, default_value_t = 9)]
    pub n_max: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GuessKind {
    PRecursive,
    Algebraic,
    ClosedForm,
}

#[derive(Args, Debug, Serialize)]
pub struct GuessArgs {
    #[arg(long, value_enum)]
    pub kind: GuessKind,
    /// Sequence file: {"name", "offset", "values": ["num/den", ...]}.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub max_order: usize,
    #[arg(long, default_value_t = 4)]
    pub max_degree: usize,
    #[arg(long, default_value_t = 4)]
    pub max_deg_y: usize,
    #[arg(long, default_value_t = 12)]
    pub max_deg_z: usize,
    /// Polynomial degree for closed-form fits.
    #[arg(long, default_value_t = 2)]
    pub degree: u32,
    #[arg(long, default_value_t = guess::DEFAULT_HOLDOUT)]
    pub holdout: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    /// Corrections n^(-1/2) and n^(-1) on a tail window.
    TwoTerm,
    /// A single O(1/n) correction on the checkpoints.
    Inverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Control {
    Binomial,
}

#[derive(Args, Debug, Serialize)]
pub struct AbnormalArgs {
    #[arg(long, default_value = "av132")]
    pub family: Family,
    #[arg(long, default_value = "21")]
    pub stat: Pattern,
    /// Analyze a synthetic control instead of a catalog statistic.
    #[arg(long, value_enum)]
    pub control: Option<Control>,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub r: u32,
    #[arg(long, default_value_t = 0.02)]
    pub tau_skew: f64,
    #[arg(long, default_value_t = 0.02)]
    pub tau_kurt: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = ModelArg::TwoTerm)]
    pub model: ModelArg,
    /// Attach guessed P-recurrences for the factorial-moment sequences.
    #[arg(long)]
    pub certificates: bool,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleAction {
    /// Recurrences, U map and averages against brute force.
    Verify {
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        /// Seed for the sampled length-5 patterns.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of sampled length-5 patterns.
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
}

/// Runs a command; the second value is the exit status on success.
pub fn run(cmd: &Command) -> Result<(Output, u8)> {
    match cmd {
        Command::Wenum(a) => wenum(a, to_value(cmd)).map(|o| (o, 0)),
        Command::Moments(a) => moments_cmd(a, to_value(cmd)).map(|o| (o, 0)),
        Command::Average(a) => average(a, to_value(cmd)).map(|o| (o, 0)),
        Command::Census(a) => census_cmd(a, to_value(cmd)).map(|o| (o, 0)),
        Command::Guess(a) => guess_cmd(a, to_value(cmd)),
        Command::Abnormal(a) => abnormal_cmd(a, to_value(cmd)).map(|o| (o, 0)),
        Command::Oracle { action: OracleAction::Verify { max_n, seed, samples } } => {
            oracle_verify(*max_n, *seed, *samples, to_value(cmd))
        }
    }
}

fn keep_vars(seq: EnumeratorSequence, vars: &Option<Vec<String>>, spec: &FuncRecSpec) -> Result<EnumeratorSequence> {
    let Some(keep) = vars else { return Ok(seq) };
    for v in keep {
        if !spec.variables.contains(v) {
            return Err(Error::Usage(format!("unknown variable {v:?}; the recurrence has {:?}", spec.variables)));
        }
    }
    let drop: Vec<&str> = spec.variables.iter().filter(|v| !keep.contains(v)).map(|s| s.as_str()).collect();
    seq.specialize(&drop)
}

fn wenum(a: &WenumArgs, config: Value) -> Result<Output> {
    let spec = a.spec.load()?;
    let seq = match (a.mode, a.vars.as_deref()) {
        (ModeArg::Full, Some([one])) => funceq::eval_marginal(&spec, a.n, one)?,
        (ModeArg::Full, _) => keep_vars(funceq::eval_full(&spec, a.n)?, &a.vars, &spec)?,
        (ModeArg::Truncated, _) => keep_vars(funceq::eval_truncated(&spec, a.n, a.r)?, &a.vars, &spec)?,
    };
    let (rendered, exact): (Vec<String>, Vec<Value>) = match &seq.values {
        Values::Full(v) => v.iter().map(|p| (p.to_string(), to_value(&p.to_wire()))).unzip(),
        Values::Truncated(v) => v.iter().map(|s| (s.to_string(), to_value(&s.to_wire()))).unzip(),
    };
    let mut text = String::new();
    for (n, r) in rendered.iter().enumerate() {
        let _ = writeln!(text, "{n}: {r}");
    }
    let values: Vec<Value> = rendered
        .iter()
        .zip(exact)
        .enumerate()
        .map(|(n, (r, e))| json!({"n": n, "rendered": r, "exact": e}))
        .collect();
    let json = json!({
        "spec": spec.name,
        "variables": seq.variables,
        "mode": seq.mode,
        "values": values,
    });
    Ok(Output { command: "wenum", config, json, csv: None, text })
}

fn moment_text(t: &MomentTable) -> String {
    let mut s = String::from("n c_n mean variance");
    for r in 3..=t.max_r {
        let _ = write!(s, " alpha{r}");
    }
    s.push('\n');
    for row in &t.rows {
        let mean = row.mean().map(|x| x.to_string()).unwrap_or_default();
        let var = row.variance().map(|x| x.to_string()).unwrap_or_default();
        let _ = write!(s, "{} {} {mean} {var}", row.n, row.catalan);
        for r in 3..=t.max_r {
            let a = row.alpha(r).map(|x| format_float(x.value)).unwrap_or_else(|| "-".into());
            let _ = write!(s, " {a}");
        }
        s.push('\n');
    }
    s
}

fn moments_cmd(a: &MomentsArgs, config: Value) -> Result<Output> {
    let spec = a.spec.load()?;
    let table = match a.mode {
        ModeArg::Full => moments::moments_from_full(&funceq::eval_full(&spec, a.max_n)?, a.r)?,
        ModeArg::Truncated => {
            moments::moments_from_truncated(&funceq::eval_truncated(&spec, a.max_n, a.r.max(1))?, a.r)?
        }
    };
    Ok(Output { command: "moments", config, json: to_value(&table), csv: Some(table.to_csv()), text: moment_text(&table) })
}

fn average(a: &AverageArgs, config: Value) -> Result<Output> {
    if a.pattern.is_empty() {
        return Err(Error::Usage("the pattern must be nonempty".into()));
    }
    let seq = census::average_sequence(&a.pattern, a.max_n);
    let mut csv = String::from("n,A\n");
    let mut text = String::new();
    for (n, v) in seq.values.iter().enumerate() {
        let _ = writeln!(csv, "{n},{v}");
        let _ = writeln!(text, "{n}: {v}");
    }
    Ok(Output { command: "average", config, json: to_value(&seq), csv: Some(csv), text })
}

fn census_cmd(a: &CensusArgs, config: Value) -> Result<Output> {
    let c = match a.family {
        Family::Av132 => census::bona_census_132(a.k, a.prefix_len)?,
        Family::Av123 => census::bona_census_123(a.k, a.n_max)?,
    };
    let report = CensusReport::new(&c);
    let mut text = format!(
        "{} k={} classes={} expected={} match={} status={}\n",
        report.family,
        report.k,
        report.class_count,
        report.expected.as_ref().map(|e| e.to_string()).unwrap_or_else(|| "-".into()),
        report.matches.map(|m| if m { "yes" } else { "no" }).unwrap_or("-"),
        report.status
    );
    for cl in &c.classes {
        let members: Vec<String> = cl.members.iter().map(|m| m.compact()).collect();
        let _ = writeln!(text, "{{{}}}", members.join(","));
    }
    for (x, y) in &report.fragile_pairs {
        let _ = writeln!(text, "fragile: {} vs {}", x.compact(), y.compact());
    }
    let _ = writeln!(text, "note: {}", report.caveat);
    Ok(Output { command: "census", config, json: to_value(&report), csv: None, text })
}

fn guess_cmd(a: &GuessArgs, config: Value) -> Result<(Output, u8)> {
    let seq = Sequence::from_json(&read(&a.input)?)?;
    let found: Option<(Value, String)> = match a.kind {
        GuessKind::PRecursive => guess::guess_p_recursive(&seq, a.max_order, a.max_degree, a.holdout)?
            .map(|r| (to_value(&r), r.rendered.clone())),
        GuessKind::Algebraic => {
            if seq.offset != 0 {
                return Err(Error::Usage("algebraic guessing needs the series to start at z^0 (offset 0)".into()));
            }
            guess::guess_algebraic(&seq.values, a.max_deg_y, a.max_deg_z, a.holdout)?.map(|e| {
                let shown = e.solved.clone().unwrap_or_else(|| format!("{} = 0", e.rendered));
                (to_value(&e), shown)
            })
        }
        GuessKind::ClosedForm => {
            guess::fit_closed_form(&seq, a.degree, a.holdout)?.map(|f| (to_value(&f), format!("a(n) = {}", f.rendered)))
        }
    };
    Ok(match found {
        Some((v, text)) => {
            let json = json!({"found": true, "sequence": seq.name, "guess": v});
            (Output { command: "guess", config, json, csv: None, text }, 0)
        }
        None => {
            let json = json!({"found": false, "sequence": seq.name});
            let text = "no guess within the given bounds".to_string();
            (Output { command: "guess", config, json, csv: None, text }, EXIT_NOT_FOUND)
        }
    })
}

fn abnormal_text(r: &AbnormalityReport) -> String {
    let mut s = String::new();
    for m in &r.moments {
        let _ = writeln!(
            s,
            "beta{} ~ {} (normal {}), metric {:.3e}",
            m.r,
            format_float(m.estimate),
            m.normal,
            m.metric
        );
    }
    let verdict = match r.verdict {
        abnormal::Verdict::Abnormal => "abnormal",
        abnormal::Verdict::Inconclusive => "inconclusive",
    };
    let _ = writeln!(s, "verdict: {verdict} ({})", r.reason);
    s
}

fn abnormal_cmd(a: &AbnormalArgs, config: Value) -> Result<Output> {
    let base = match a.model {
        ModelArg::TwoTerm => Tolerances::default(),
        ModelArg::Inverse => Tolerances::single_inverse_power(),
    };
    let tol = Tolerances { tau_skew: a.tau_skew, tau_kurt: a.tau_kurt, epsilon: a.epsilon, ..base };
    let report = match a.control {
        Some(Control::Binomial) => abnormal::analyze_binomial_control(a.n, a.r, &tol)?,
        None => {
            let mut report = abnormal::analyze(a.family, &a.stat, a.n, a.r, &tol)?;
            if a.certificates {
                let spec = funceq::builtin_spec(a.family, &a.stat)?;
                let table =
                    moments::moments_from_truncated(&funceq::eval_truncated(&spec, a.n, a.r)?, a.r)?;
                report.certificates = abnormal::certificates(&table, a.n.min(120), 8, 8)?;
            }
            report
        }
    };
    Ok(Output { command: "abnormal", config, json: to_value(&report), csv: None, text: abnormal_text(&report) })
}

fn sampled_averages(max_n: usize, seed: u64, samples: usize) -> Result<Vec<CheckResult>> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let all = Permutation::all(5);
    let picks: Vec<&Permutation> = all.choose_multiple(&mut rng, samples).collect();
    let avoiders: Vec<Vec<Permutation>> =
        (0..=max_n).map(|n| enumerate_avoiders(&Family::Av132.forbidden(), n)).collect::<Result<_>>()?;
    Ok(picks
        .into_iter()
        .map(|p| {
            let seq = census::average_sequence(p, max_n);
            let bad = (0..=max_n).find(|&n| {
                let brute: u64 = avoiders[n].iter().map(|pi| count_occurrences(p, pi)).sum();
                seq.values[n] != brute.into()
            });
            CheckResult {
                name: format!("averages {}", p.compact()),
                passed: bad.is_none(),
                detail: match bad {
                    None => format!("n <= {max_n}"),
                    Some(n) => format!("differs at n = {n}"),
                },
            }
        })
        .collect())
}

fn oracle_verify(max_n: usize, seed: u64, samples: usize, config: Value) -> Result<(Output, u8)> {
    let mut results = checks::oracle_suite(max_n)?;
    results.extend(sampled_averages(max_n.min(9), seed, samples)?);
    let all_pass = results.iter().all(|r| r.passed);
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut text = String::new();
    for r in &results {
        let _ = writeln!(text, "{:<width$}  {}  {}", r.name, if r.passed { "PASS" } else { "FAIL" }, r.detail);
    }
    let _ = writeln!(text, "{} of {} checks passed", results.iter().filter(|r| r.passed).count(), results.len());
    let mut csv = String::from("check,passed,detail\n");
    for r in &results {
        let _ = writeln!(csv, "\"{}\",{},\"{}\"", r.name, r.passed, r.detail.replace('"', "'"));
    }
    let json = json!({"all_passed": all_pass, "checks": results});
    let status = if all_pass { 0 } else { EXIT_INTERNAL };
    Ok((Output { command: "oracle verify", config, json, csv: Some(csv), text }, status))
}
