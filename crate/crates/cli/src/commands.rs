//! One function per subcommand. Each returns the outcome for the report
//! and the text shown without `--json`.

use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use regfac_core::classify::{classify, CentralVerdict, ClassifyConfig, ParityVerdict};
use regfac_core::factor::{Algorithm, FactorResult, Trace};
use regfac_core::primes::trial_factor;
use regfac_core::regulator::{regulator_upper_bound, principal_cycle, regulator_traverse_with, TraverseOptions};
use regfac_core::{convergents, expand_sqrt, factor, isqrt, sum_two_squares, Error, FactorConfig, RegulatorSource};
use serde_json::{json, Value};

use crate::args::{BenchClass, Command};
use crate::config::Config;
use crate::report::{sig12, Outcome};

pub struct CommandOutput {
    pub n: Option<String>,
    pub outcome: Outcome,
    pub trace: Option<Value>,
    pub text: String,
}

/// An input problem, reported with exit code 1.
#[derive(Debug)]
pub struct Failure {
    pub kind: String,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            kind: "invalid_input".into(),
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            kind: error_kind(&e).into(),
            message: e.to_string(),
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::TooSmall { .. } => "too_small",
        Error::EvenInput => "even_input",
        Error::PerfectSquare => "perfect_square",
        Error::ProbablePrime => "probable_prime",
        Error::StepCapExceeded { .. } => "step_cap_exceeded",
        Error::EvenPeriod { .. } => "even_period",
        Error::NonPositiveRegulator => "non_positive_regulator",
        Error::RegulatorMismatch { .. } => "regulator_mismatch",
        Error::OutsideEnvelope { .. } => "outside_envelope",
        Error::QuarticPrecondition(_) | Error::BadJacobiModulus => "bad_symbol_arguments",
        _ => "internal",
    }
}

fn parse_n(s: &str) -> Result<BigUint, Failure> {
    let t = s.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Failure::input(format!("expected a decimal integer, got {s:?}")));
    }
    t.parse()
        .map_err(|_| Failure::input(format!("expected a decimal integer, got {s:?}")))
}

/// A positive decimal such as `4.7003977109172`, `12` or `1.5e3`.
fn parse_decimal(s: &str) -> Result<f64, Failure> {
    let t = s.trim();
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], Some(&t[i + 1..])),
        None => (t, None),
    };
    let digits = mantissa.replacen('.', "", 1);
    let mantissa_ok = !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit());
    let exponent_ok = exponent.map_or(true, |e| {
        let e = e.strip_prefix(['+', '-']).unwrap_or(e);
        !e.is_empty() && e.bytes().all(|b| b.is_ascii_digit())
    });
    match t.parse::<f64>() {
        Ok(v) if mantissa_ok && exponent_ok && v.is_finite() => Ok(v),
        _ => Err(Failure::input(format!("expected a decimal number, got {s:?}"))),
    }
}

fn done(n: Option<&BigUint>, value: Value, text: String) -> CommandOutput {
    CommandOutput {
        n: n.map(|n| n.to_string()),
        outcome: Outcome::Done { value },
        trace: None,
        text,
    }
}

pub fn execute(command: &Command, cfg: &Config) -> Result<CommandOutput, (Option<String>, Failure)> {
    let n_of = |s: &String| Some(s.trim().to_string());
    match command {
        Command::Expand { n } => expand(n, cfg).map_err(|f| (n_of(n), f)),
        Command::Convergents { n, count } => convergent_list(n, *count).map_err(|f| (n_of(n), f)),
        Command::Sum2sq { n } => two_squares(n).map_err(|f| (n_of(n), f)),
        Command::Classify { n, p, q, verify } => {
            predict(n, p.as_deref().zip(q.as_deref()), *verify, cfg).map_err(|f| (n_of(n), f))
        }
        Command::Cycle { n } => cycle(n, cfg).map_err(|f| (n_of(n), f)),
        Command::Regulator { n } => regulator(n, cfg).map_err(|f| (n_of(n), f)),
        Command::Factor {
            n,
            regulator,
            regulator_multiple,
            imax_override,
        } => run_factor(
            n,
            regulator.as_deref(),
            regulator_multiple.as_deref(),
            *imax_override,
            cfg,
        )
        .map_err(|f| (n_of(n), f)),
        Command::Bench { range, class, workers } => bench(range, *class, *workers, cfg).map_err(|f| (None, f)),
    }
}

fn expand(s: &str, cfg: &Config) -> Result<CommandOutput, Failure> {
    let n = parse_n(s)?;
    let e = expand_sqrt(&n, cfg.step_cap)?;
    let period: Vec<String> = e.period_quotients.iter().map(|a| a.to_string()).collect();
    let parity = if e.tau % 2 == 0 { "even" } else { "odd" };
    let text = format!("a0 = {}\nperiod = [{}]\ntau = {}\n", e.a0, period.join(", "), e.tau);
    let value = json!({ "a0": e.a0.to_string(), "period": period, "tau": e.tau, "parity": parity });
    Ok(done(Some(&n), value, text))
}

fn convergent_list(s: &str, count: usize) -> Result<CommandOutput, Failure> {
    let n = parse_n(s)?;
    let cs = convergents(&n, count)?;
    let mut text = String::new();
    let mut rows = Vec::with_capacity(cs.len());
    for c in &cs {
        let norm = c.norm(&n);
        let _ = writeln!(text, "{:>4}  {}/{}  norm {}", c.index, c.p, c.q, norm);
        rows.push(json!({
            "index": c.index,
            "p": c.p.to_string(),
            "q": c.q.to_string(),
            "norm": norm.to_string(),
        }));
    }
    Ok(done(Some(&n), json!({ "convergents": rows }), text))
}

fn two_squares(s: &str) -> Result<CommandOutput, Failure> {
    let n = parse_n(s)?;
    let (a, b) = sum_two_squares(&n)?;
    let text = format!("{n} = {a}^2 + {b}^2\n");
    Ok(done(Some(&n), json!({ "a": a.to_string(), "b": b.to_string() }), text))
}

fn predict(s: &str, known: Option<(&str, &str)>, verify: bool, cfg: &Config) -> Result<CommandOutput, Failure> {
    let n = parse_n(s)?;
    let known = match known {
        Some((p, q)) => Some((parse_n(p)?, parse_n(q)?)),
        None => None,
    };
    let ccfg = ClassifyConfig {
        trial_bound: cfg.trial_bound,
    };
    let (parity, central) = classify(&n, known.as_ref().map(|(p, q)| (p, q)), &ccfg);
    let mut text = format!(
        "parity: {:?} (rule {})\ncentral: {:?} (rule {})\n",
        parity.verdict,
        parity.rule.tag(),
        central.verdict,
        central.rule.tag()
    );
    let mut value = json!({
        "parity": { "verdict": parity.verdict, "rule": parity.rule.tag() },
        "central": { "verdict": central.verdict, "rule": central.rule.tag() },
    });
    if verify {
        let e = expand_sqrt(&n, cfg.step_cap)?;
        let even = e.tau % 2 == 0;
        let mid = e.central_q().cloned();
        let parity_ok = match parity.verdict {
            ParityVerdict::Even => even,
            ParityVerdict::Odd => !even,
            ParityVerdict::Unknown => true,
        };
        let small = |m: &BigUint| *m <= BigUint::from(2u8);
        let central_ok = match central.verdict {
            CentralVerdict::NontrivialGuaranteed => mid.as_ref().is_some_and(|m| !small(m)),
            CentralVerdict::CentralIsTwo => mid.as_ref().is_some_and(|m| *m == BigUint::from(2u8)),
            CentralVerdict::Unknown => true,
        };
        let agrees = parity_ok && central_ok;
        let mid_text = mid.as_ref().map_or("none".to_string(), |m| m.to_string());
        let _ = writeln!(
            text,
            "actual: tau = {}, central term {mid_text}, agrees = {agrees}",
            e.tau
        );
        value["actual"] = json!({
            "tau": e.tau,
            "central_term": mid.map(|m| m.to_string()),
            "agrees": agrees,
        });
    }
    Ok(done(Some(&n), value, text))
}

fn cycle(s: &str, cfg: &Config) -> Result<CommandOutput, Failure> {
    let n = parse_n(s)?;
    let forms = principal_cycle(&n, cfg.step_cap)?;
    let (last, body) = forms.split_last().ok_or_else(|| Failure::input("empty cycle"))?;
    let mut text = String::new();
    let mut rows = Vec::with_capacity(body.len());
    for (m, f) in body.iter().enumerate() {
        let _ = writeln!(text, "{m:>6}  {}  {}", f.form, sig12(f.dist));
        rows.push(json!({
            "index": m,
            "a": f.form.a.to_string(),
            "b": f.form.b.to_string(),
            "c": f.form.c.to_string(),
            "distance": sig12(f.dist),
        }));
    }
    let _ = writeln!(
        text,
        "{} forms, distance at cycle close {}",
        body.len(),
        sig12(last.dist)
    );
    let value = json!({ "length": body.len(), "forms": rows, "closing_distance": sig12(last.dist) });
    Ok(done(Some(&n), value, text))
}

fn traverse_options(cfg: &Config) -> TraverseOptions {
    TraverseOptions {
        step_cap: cfg.step_cap,
        cross_check_limit: cfg.cross_check_limit,
    }
}

fn regulator(s: &str, cfg: &Config) -> Result<CommandOutput, Failure> {
    let n = parse_n(s)?;
    let r = regulator_traverse_with(&n, &traverse_options(cfg))?;
    let info = r.traversal.as_ref();
    let text = format!(
        "R+ = {}\ntau = {}\nbound = {}\n",
        sig12(r.value),
        info.map_or(0, |t| t.tau),
        sig12(regulator_upper_bound(&n))
    );
    let value = json!({
        "regulator": sig12(r.value),
        "tau": info.map(|t| t.tau),
        "steps": info.map(|t| t.steps),
        "half_distance": info.map(|t| sig12(t.half_distance)),
        "quarter_distance": info.and_then(|t| t.quarter_distance).map(sig12),
        "convergent_log": info.and_then(|t| t.convergent_log).map(sig12),
        "upper_bound": sig12(regulator_upper_bound(&n)),
    });
    Ok(done(Some(&n), value, text))
}

fn factor_config(cfg: &Config, regulator: RegulatorSource, imax_override: Option<u64>) -> FactorConfig {
    FactorConfig {
        regulator,
        imax_override,
        step_cap: cfg.step_cap,
        max_traversal_bits: cfg.max_traversal_bits,
    }
}

/// The trace with every distance rendered by [`sig12`].
pub fn trace_json(t: &Trace) -> Value {
    let reg = &t.regulator;
    let s = |x: f64| sig12(x);
    json!({
        "algorithm": t.algorithm,
        "regulator": {
            "value": s(reg.value),
            "kind": reg.kind,
            "multiplier_hint": reg.multiplier_hint,
            "tau": reg.traversal.map(|i| i.tau),
        },
        "scan": t.scan.as_ref().map(|sc| json!({
            "i_max": sc.i_max,
            "iterations": sc.iterations,
            "hit_index": sc.hit_index,
        })),
        "search": t.search.as_ref().map(|se| json!({
            "base": { "steps": se.base.steps, "distance": s(se.base.dist), "threshold": s(se.base.threshold) },
            "halvings": se.halvings,
            "rounds": se.rounds.iter().map(|r| json!({
                "multiple": s(r.multiple),
                "branches": r.branches.iter().map(|b| json!({
                    "j": b.j,
                    "target": s(b.target),
                    "squarings": b.t,
                    "squaring_bound": b.t_bound,
                    "distances": b.distances.iter().copied().map(s).collect::<Vec<_>>(),
                    "corrections": b.corrections.iter().copied().map(s).collect::<Vec<_>>(),
                    "accumulated": s(b.d_bar),
                    "start_distance": s(b.target_form_dist),
                    "greedy_gap": s(b.greedy_gap),
                    "greedy_bound": s(b.greedy_bound),
                    "psi": b.psi,
                    "steps": b.steps,
                    "hit_cycle_end": b.hit_cycle_end,
                    "found_by": b.found_by,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })),
    })
}

fn factor_outcome(n: &BigUint, result: &FactorResult) -> Outcome {
    match result {
        FactorResult::Factor(d) => Outcome::Factor {
            factor: d.to_string(),
            cofactor: (n / d).to_string(),
        },
        FactorResult::Inapplicable => Outcome::Inapplicable,
    }
}

fn run_factor(
    s: &str,
    exact: Option<&str>,
    multiple: Option<&str>,
    imax_override: Option<u64>,
    cfg: &Config,
) -> Result<CommandOutput, Failure> {
    let n = parse_n(s)?;
    let source = match (exact, multiple) {
        (Some(r), _) => RegulatorSource::Exact(parse_decimal(r)?),
        (None, Some(r)) => RegulatorSource::Multiple(parse_decimal(r)?),
        (None, None) => RegulatorSource::Traverse,
    };
    let out = factor(&n, &factor_config(cfg, source, imax_override))?;
    let outcome = factor_outcome(&n, &out.result);
    let mut text = match &outcome {
        Outcome::Factor { factor, cofactor } => format!("{n} = {factor} * {cofactor}\n"),
        _ => format!("{n}: no factor found\n"),
    };
    let _ = writeln!(
        text,
        "algorithm: {:?}, regulator {}",
        out.trace.algorithm,
        sig12(out.trace.regulator.value)
    );
    Ok(CommandOutput {
        n: Some(n.to_string()),
        outcome,
        trace: Some(trace_json(&out.trace)),
        text,
    })
}

fn parse_range(s: &str) -> Result<(u64, u64), Failure> {
    let bad = || Failure::input(format!("expected a range A..B, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a >= b {
        return Err(bad());
    }
    Ok((a, b))
}

fn in_class(n: u64, class: BenchClass) -> bool {
    if n < 9 || n % 2 == 0 {
        return false;
    }
    let nb = BigUint::from(n);
    let root = isqrt(&nb);
    if &root * &root == nb {
        return false;
    }
    let bound = u64::try_from(&root).unwrap_or(u64::MAX);
    let td = trial_factor(&nb, bound);
    let primes: Vec<u64> = td.primes().iter().filter_map(|p| u64::try_from(p).ok()).collect();
    let semiprime = primes.len() == 2 && td.is_squarefree();
    if primes.len() == 1 && td.factors.iter().all(|f| f.1 == 1) {
        return false; // prime
    }
    match class {
        BenchClass::Odd => true,
        BenchClass::ThreeByThree => semiprime && primes.iter().all(|p| p % 4 == 3),
        BenchClass::FiveByThree => {
            semiprime && {
                let (p, q) = (primes[0], primes[1]);
                (p % 8 == 5 && q % 4 == 3) || (q % 8 == 5 && p % 4 == 3)
            }
        }
        BenchClass::OneModFourWithThree => n % 4 == 1 && primes.iter().any(|p| p % 4 == 3),
    }
}

struct BenchRow {
    n: u64,
    status: &'static str,
    algorithm: Option<Algorithm>,
    ms: f64,
}

fn bench(range: &str, class: BenchClass, workers: Option<usize>, cfg: &Config) -> Result<CommandOutput, Failure> {
    let (a, b) = parse_range(range)?;
    let threads = workers.or(cfg.workers).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::input(e.to_string()))?;
    let fcfg = factor_config(cfg, RegulatorSource::Traverse, None);
    let mut rows: Vec<BenchRow> = pool.install(|| {
        (a..b)
            .into_par_iter()
            .filter(|&n| in_class(n, class))
            .map(|n| {
                let start = Instant::now();
                let res = factor(&BigUint::from(n), &fcfg);
                let ms = start.elapsed().as_secs_f64() * 1e3;
                let (status, algorithm) = match &res {
                    Ok(out) => match out.result {
                        FactorResult::Factor(_) => ("factor", Some(out.trace.algorithm)),
                        FactorResult::Inapplicable => ("inapplicable", Some(out.trace.algorithm)),
                    },
                    Err(_) => ("error", None),
                };
                BenchRow {
                    n,
                    status,
                    algorithm,
                    ms,
                }
            })
            .collect()
    });
    rows.sort_by_key(|r| r.n);

    let count = |s: &str| rows.iter().filter(|r| r.status == s).count();
    let by_alg = |alg: Algorithm| rows.iter().filter(|r| r.algorithm == Some(alg)).count();
    let total_ms: f64 = rows.iter().map(|r| r.ms).sum();
    let mean_ms = if rows.is_empty() {
        0.0
    } else {
        total_ms / rows.len() as f64
    };
    let max_ms = rows.iter().map(|r| r.ms).fold(0.0, f64::max);
    let unresolved: Vec<String> = rows
        .iter()
        .filter(|r| r.status != "factor")
        .take(20)
        .map(|r| r.n.to_string())
        .collect();
    let (factored, inapplicable, errors) = (count("factor"), count("inapplicable"), count("error"));
    let text = format!(
        "{} inputs: {factored} factored, {inapplicable} inapplicable, {errors} errors\n\
         scan {}, giant steps {}, halving {}\nmean {:.3} ms, max {:.3} ms\n",
        rows.len(),
        by_alg(Algorithm::SmallRegulatorScan),
        by_alg(Algorithm::GiantStep),
        by_alg(Algorithm::MultipleHalving),
        mean_ms,
        max_ms
    );
    let value = json!({
        "range": [a.to_string(), b.to_string()],
        "inputs": rows.len(),
        "factored": factored,
        "inapplicable": inapplicable,
        "errors": errors,
        "by_algorithm": {
            "small_regulator_scan": by_alg(Algorithm::SmallRegulatorScan),
            "giant_step": by_alg(Algorithm::GiantStep),
            "multiple_halving": by_alg(Algorithm::MultipleHalving),
        },
        "unresolved": unresolved,
        "mean_ms": mean_ms,
        "max_ms": max_ms,
    });
    Ok(done(None, value, text))
}
