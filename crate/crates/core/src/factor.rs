//! Factoring with the regulator.
//!
//! Two procedures, chosen by comparing `R⁺(N)` with `(ln N)²`:
//!
//! * [`algorithm1`] scans `Q_1, Q_2, …` for a coefficient sharing a factor
//!   with `N`. It covers the whole half-cycle when `R⁺` is small.
//! * [`algorithm2`] jumps by repeated squaring of a base form to a form at
//!   distance about `R⁺/2` (or `R⁺/4`), then walks `ρ` forwards and `ρ⁻¹`
//!   backwards from there until a third coefficient shares a factor with
//!   `N`. When only a multiple `k·R⁺` is known, [`resolve_multiple`] halves
//!   the target whenever the walk lands on the end of the cycle.
//!
//! [`factor`] validates the input, obtains the regulator and dispatches.

use alloc::vec::Vec;
use core::f64::consts::LN_2;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{ln_biguint, DistanceSum};
use crate::cf::{nonsquare_root, QuadIrrState, WordCf};
use crate::error::{Error, Result};
use crate::primes::is_probable_prime;
use crate::qform::{Discriminant, DistForm, QForm};
use crate::regulator::{
    accept_external, accept_external_exact, log2_ceil, regulator_traverse_with, RegulatorValue, TraverseOptions,
};

/// Default ceiling on the size of inputs whose regulator is computed by
/// walking the cycle.
pub const DEFAULT_TRAVERSAL_BITS: u32 = 48;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorResult {
    Factor(BigUint),
    Inapplicable,
}

impl FactorResult {
    pub fn factor(&self) -> Option<&BigUint> {
        match self {
            FactorResult::Factor(d) => Some(d),
            FactorResult::Inapplicable => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Algorithm {
    /// Scan of the `Q` sequence for small regulators.
    SmallRegulatorScan,
    /// Giant steps to the target distance, then the two-sided walk.
    GiantStep,
    /// [`Algorithm::GiantStep`] rounds with the target halved between them.
    MultipleHalving,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanTrace {
    pub i_max: u64,
    pub iterations: u64,
    /// Index `i` of the `Q_i` that revealed the factor.
    pub hit_index: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BaseTrace {
    pub steps: u64,
    pub dist: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Walker {
    /// The form `F̄` reached by the giant steps.
    Start,
    Forward,
    Backward,
}

/// One target distance `M/2^j` of a search round.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BranchTrace {
    pub j: u32,
    pub target: f64,
    /// `d_0 … d_t`, the distances of the squared base forms.
    pub distances: Vec<f64>,
    /// Reduction correction of each squaring and of each greedy product.
    pub corrections: Vec<f64>,
    pub t: u32,
    /// `⌈log₂ target⌉`.
    pub t_bound: u32,
    /// Sum of the `d_i` chosen by the greedy decomposition.
    pub d_bar: f64,
    /// Distance of the target form including the greedy products' own
    /// reduction corrections.
    pub target_form_dist: f64,
    /// True when `d_0` was among the chosen terms.
    pub used_base: bool,
    /// `target − d_bar`.
    pub greedy_gap: f64,
    /// The bound `greedy_gap` must respect.
    pub greedy_bound: f64,
    pub psi: u64,
    /// Walk iterations consumed (`Ψ + 1` when exhausted).
    pub steps: u64,
    pub hit_cycle_end: bool,
    pub found_by: Option<Walker>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RoundTrace {
    /// The regulator multiple `M` this round targets fractions of.
    pub multiple: f64,
    pub branches: Vec<BranchTrace>,
}

impl RoundTrace {
    pub fn hit_cycle_end(&self) -> bool {
        self.branches.iter().any(|b| b.hit_cycle_end)
    }

    pub fn found(&self) -> bool {
        self.branches.iter().any(|b| b.found_by.is_some())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchTrace {
    pub base: BaseTrace,
    pub rounds: Vec<RoundTrace>,
    pub halvings: u32,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Trace {
    pub algorithm: Algorithm,
    pub regulator: RegulatorValue,
    pub scan: Option<ScanTrace>,
    pub search: Option<SearchTrace>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorOutcome {
    pub result: FactorResult,
    pub trace: Trace,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegulatorSource {
    /// Walk the principal cycle (bounded by `max_traversal_bits`).
    Traverse,
    /// `R⁺(N)` supplied by the caller.
    Exact(f64),
    /// Some positive multiple `k·R⁺(N)` with `k` unknown.
    Multiple(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorConfig {
    pub regulator: RegulatorSource,
    /// Replaces `i_max` and `Ψ` when set.
    pub imax_override: Option<u64>,
    /// Cap on the period search of the traversal.
    pub step_cap: Option<u64>,
    pub max_traversal_bits: u32,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            regulator: RegulatorSource::Traverse,
            imax_override: None,
            step_cap: None,
            max_traversal_bits: DEFAULT_TRAVERSAL_BITS,
        }
    }
}

/// `gcd(x, n)` when it is a proper divisor of `n`.
fn proper_divisor(x: &BigInt, n: &BigUint) -> Option<BigUint> {
    let x = x.magnitude();
    if x.is_zero() {
        return None;
    }
    let g = x.gcd(n);
    (!g.is_one() && g != *n).then_some(g)
}

fn finish(n: &BigUint, result: FactorResult, trace: Trace) -> FactorOutcome {
    if let FactorResult::Factor(d) = &result {
        assert!(!d.is_one() && d < n && (n % d).is_zero(), "unsound factor {d} of {n}");
    }
    FactorOutcome { result, trace }
}

/// Odd, greater than 1 and not a square.
fn validate(n: &BigUint) -> Result<()> {
    if *n <= BigUint::one() {
        return Err(Error::TooSmall { min: 1 });
    }
    if n.is_even() {
        return Err(Error::EvenInput);
    }
    nonsquare_root(n).map(|_| ())
}

/// `ln(4n)`.
fn ln_4n(n: &BigUint) -> f64 {
    ln_biguint(n) + 2.0 * LN_2
}

/// `i_max = R/ln 2 + ln(4N)/(2 ln 2) + 1`, truncated.
pub fn alg1_imax(n: &BigUint, regulator: f64) -> u64 {
    let v = regulator / LN_2 + ln_4n(n) / (2.0 * LN_2) + 1.0;
    v.to_u64().unwrap_or(u64::MAX)
}

/// `Ψ = (2/ln 2)(4 ln(4N) log₂(M/2) + (33/4) ln(4N)) + 1`, truncated.
pub fn psi_bound(n: &BigUint, regulator: f64) -> u64 {
    let l = ln_4n(n);
    let log_term = libm::log2(regulator / 2.0).max(0.0);
    let v = (2.0 / LN_2) * (4.0 * l * log_term + 8.25 * l) + 1.0;
    v.to_u64().unwrap_or(u64::MAX)
}

/// Scans `Q_1 … Q_{i_max}` for a coefficient sharing a factor with `n`.
pub fn algorithm1(n: &BigUint, regulator: &RegulatorValue, imax_override: Option<u64>) -> Result<FactorOutcome> {
    validate(n)?;
    let i_max = imax_override.unwrap_or_else(|| alg1_imax(n, regulator.value));
    let root = nonsquare_root(n)?;
    let mut hit = None;
    let mut iterations = 0u64;
    if let Some(mut w) = WordCf::new(n, &root) {
        for i in 1..=i_max {
            w.advance();
            iterations = i;
            let g = num_integer::gcd(w.q, w.n);
            if g != 1 && g != w.n {
                hit = Some((i, BigUint::from(g)));
                break;
            }
        }
    } else {
        let mut state = QuadIrrState::sqrt_start(n)?;
        for i in 1..=i_max {
            state = state.step().1;
            iterations = i;
            if let Some(g) = proper_divisor(state.q(), n) {
                hit = Some((i, g));
                break;
            }
        }
    }
    let scan = ScanTrace {
        i_max,
        iterations,
        hit_index: hit.as_ref().map(|(i, _)| *i),
    };
    let result = match hit {
        Some((_, g)) => FactorResult::Factor(g),
        None => FactorResult::Inapplicable,
    };
    Ok(finish(
        n,
        result,
        Trace {
            algorithm: Algorithm::SmallRegulatorScan,
            regulator: *regulator,
            scan: Some(scan),
            search: None,
        },
    ))
}

/// Walks `ρ` from the principal form until the distance reaches
/// `2 ln(4N) + 1`. With `stop_at_closure`, fails if the cycle closes first.
fn base_walk(disc: &Discriminant, n: &BigUint, stop_at_closure: bool) -> Result<(DistForm, BaseTrace)> {
    let threshold = 2.0 * ln_4n(n) + 1.0;
    let mut form = QForm::principal(n);
    let mut dist = DistanceSum::new();
    let mut steps = 0u64;
    while dist.value() < threshold {
        dist.add(disc.delta(&form));
        form = disc.rho(&form)?;
        steps += 1;
        if stop_at_closure && form.a.magnitude().is_one() && dist.value() < threshold {
            return Err(Error::UseAlgorithm1);
        }
    }
    let dist = dist.value();
    Ok((DistForm::new(form, dist), BaseTrace { steps, dist, threshold }))
}

/// The form `G_0` at distance at least `2 ln(4N) + 1` from the principal
/// form, reached by `ρ` steps.
///
/// Returns [`Error::UseAlgorithm1`] when the cycle closes before that
/// distance, i.e. when the regulator is too small for giant steps.
pub fn build_base_form(n: &BigUint) -> Result<DistForm> {
    validate(n)?;
    let disc = Discriminant::of_radicand(n)?;
    Ok(base_walk(&disc, n, true)?.0)
}

/// Squaring cap: distances at least double, so this is never reached for
/// finite targets.
const MAX_SQUARINGS: usize = 2048;

fn run_branch(
    disc: &Discriminant,
    n: &BigUint,
    base: &DistForm,
    multiple: f64,
    j: u32,
    psi: u64,
) -> Result<(Option<BigUint>, BranchTrace)> {
    let target = multiple / f64::from(1u32 << j);
    let l4 = ln_4n(n);

    let mut powers = alloc::vec![base.clone()];
    let mut corrections = Vec::new();
    while powers.last().is_some_and(|g| g.dist <= target) {
        if powers.len() > MAX_SQUARINGS {
            return Err(Error::Invalid(alloc::format!("squaring did not pass target {target}")));
        }
        let last = powers.last().unwrap_or(base);
        let (next, info) = disc.giant_step(last, last)?;
        corrections.push(info.correction);
        powers.push(next);
    }
    let t = powers.len() - 1;

    let mut used_base = false;
    let (start, d_bar) = if t == 0 {
        (DistForm::new(QForm::principal(n), 0.0), 0.0)
    } else {
        used_base = t == 1;
        let mut fbar = powers[t - 1].clone();
        let mut d_bar = DistanceSum::starting_at(powers[t - 1].dist);
        for i in (0..t.saturating_sub(1)).rev() {
            if d_bar.value() + powers[i].dist <= target {
                let (next, info) = disc.giant_step(&fbar, &powers[i])?;
                corrections.push(info.correction);
                fbar = next;
                d_bar.add(powers[i].dist);
                if i == 0 {
                    used_base = true;
                }
            }
        }
        (fbar, d_bar.value())
    };

    let greedy_gap = target - d_bar;
    let greedy_bound = if used_base {
        base.dist + (t.saturating_sub(1)) as f64 * 2.0 * l4
    } else {
        base.dist
    };

    let mut forward = disc.rho(&start.form)?;
    let mut backward = disc.rho_inv(&start.form)?;
    let mut hit_cycle_end = start.form.c.magnitude().is_one();
    // The walkers' third coefficients skip the one of `F̄` itself.
    let mut found = proper_divisor(&start.form.c, n).map(|g| (Walker::Start, g));
    let mut steps = 0u64;
    for i in 0..psi {
        if found.is_some() {
            break;
        }
        steps = i + 1;
        for (walker, form) in [(Walker::Forward, &forward), (Walker::Backward, &backward)] {
            if form.c.magnitude().is_one() {
                hit_cycle_end = true;
            }
            if found.is_none() {
                if let Some(g) = proper_divisor(&form.c, n) {
                    found = Some((walker, g));
                }
            }
        }
        if found.is_some() {
            break;
        }
        forward = disc.rho(&forward)?;
        backward = disc.rho_inv(&backward)?;
    }

    let trace = BranchTrace {
        j,
        target,
        distances: powers.iter().map(|g| g.dist).collect(),
        corrections,
        t: t as u32,
        t_bound: log2_ceil(target),
        d_bar,
        target_form_dist: start.dist,
        used_base,
        greedy_gap,
        greedy_bound,
        psi,
        steps,
        hit_cycle_end,
        found_by: found.as_ref().map(|(w, _)| *w),
    };
    Ok((found.map(|(_, g)| g), trace))
}

/// One search round: both branches `j = 1, 2` against `multiple`.
fn run_round(
    disc: &Discriminant,
    n: &BigUint,
    base: &DistForm,
    multiple: f64,
    psi_override: Option<u64>,
) -> Result<(Option<BigUint>, RoundTrace)> {
    let psi = psi_override.unwrap_or_else(|| psi_bound(n, multiple));
    let mut branches = Vec::with_capacity(2);
    for j in 1..=2 {
        let (found, trace) = run_branch(disc, n, base, multiple, j, psi)?;
        branches.push(trace);
        if found.is_some() {
            return Ok((found, RoundTrace { multiple, branches }));
        }
    }
    Ok((None, RoundTrace { multiple, branches }))
}

fn search(n: &BigUint, regulator: &RegulatorValue, psi_override: Option<u64>, halving: bool) -> Result<FactorOutcome> {
    validate(n)?;
    let disc = Discriminant::of_radicand(n)?;
    let (base, base_trace) = base_walk(&disc, n, false)?;
    let floor = ln_biguint(n) * ln_biguint(n);
    let mut multiple = regulator.value;
    let mut rounds = Vec::new();
    let mut halvings = 0u32;
    let result = loop {
        let (found, round) = run_round(&disc, n, &base, multiple, psi_override)?;
        let at_end = round.hit_cycle_end();
        rounds.push(round);
        if let Some(g) = found {
            break FactorResult::Factor(g);
        }
        if halving && at_end && multiple / 2.0 > floor {
            multiple /= 2.0;
            halvings += 1;
        } else {
            break FactorResult::Inapplicable;
        }
    };
    let algorithm = if halving {
        Algorithm::MultipleHalving
    } else {
        Algorithm::GiantStep
    };
    Ok(finish(
        n,
        result,
        Trace {
            algorithm,
            regulator: *regulator,
            scan: None,
            search: Some(SearchTrace {
                base: base_trace,
                rounds,
                halvings,
            }),
        },
    ))
}

/// Giant steps to `R⁺/2` and `R⁺/4`, then the two-sided walk of at most
/// `Ψ` steps (or `psi_override`).
pub fn algorithm2(n: &BigUint, regulator: &RegulatorValue, psi_override: Option<u64>) -> Result<FactorOutcome> {
    search(n, regulator, psi_override, false)
}

/// [`algorithm2`] for a multiple `k·R⁺`: whenever a round finds no factor
/// but walks over the end of the cycle, the target is halved and the round
/// repeated, as long as the halved multiple stays above `(ln N)²`.
pub fn resolve_multiple(n: &BigUint, multiple: &RegulatorValue, psi_override: Option<u64>) -> Result<FactorOutcome> {
    search(n, multiple, psi_override, true)
}

/// Validates `n`, obtains the regulator per `config` and runs the
/// appropriate procedure.
pub fn factor(n: &BigUint, config: &FactorConfig) -> Result<FactorOutcome> {
    validate(n)?;
    if is_probable_prime(n) {
        return Err(Error::ProbablePrime);
    }
    let regulator = match config.regulator {
        RegulatorSource::Traverse => {
            if n.bits() > u64::from(config.max_traversal_bits) {
                return Err(Error::OutsideEnvelope {
                    bits: n.bits(),
                    limit: config.max_traversal_bits,
                });
            }
            let options = TraverseOptions {
                step_cap: config.step_cap,
                ..TraverseOptions::default()
            };
            regulator_traverse_with(n, &options)?
        }
        RegulatorSource::Exact(r) => accept_external_exact(n, r)?,
        RegulatorSource::Multiple(r) => accept_external(n, r)?,
    };
    let ln_n = ln_biguint(n);
    if regulator.value <= ln_n * ln_n {
        algorithm1(n, &regulator, config.imax_override)
    } else if regulator.is_exact() {
        algorithm2(n, &regulator, config.imax_override)
    } else {
        resolve_multiple(n, &regulator, config.imax_override)
    }
}
