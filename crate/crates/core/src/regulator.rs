//! `R⁺(N)`, the logarithm of the least solution of `x² − Ny² = 1`.
//!
//! [`regulator_traverse`] walks the principal cycle once (twice for odd
//! periods) and sums the step distances. When the period is short enough for
//! the Pell solution to be formed explicitly, the sum is checked against
//! `ln(p + q√N)`.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

use crate::arith::{ln_biguint, ln_p_plus_q_sqrt, step_distance, step_distance_u64, DistanceSum, Scaled};
use crate::cf::{default_step_cap, expand_sqrt, nonsquare_root, Parity, QuadIrrState, WordCf};
use crate::error::{Error, Result};
use crate::qform::{DistForm, QForm};

/// Relative agreement required between traversal and convergent logarithm.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-9;

/// Longest walk (in cycle steps) for which the Pell solution is formed.
pub const DEFAULT_CROSS_CHECK_LIMIT: u64 = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RegulatorKind {
    ExactTraversal,
    ExternalMultiple,
}

/// What the traversal saw on the way round.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraversalInfo {
    pub tau: u64,
    /// `τ` or `2τ`: the number of steps summed.
    pub steps: u64,
    /// Distance to `Υ_{τ/2}` (even `τ`) or to `Υ_τ` (odd `τ`).
    pub half_distance: f64,
    /// Distance to `Υ_{(τ−1)/2}` for odd `τ`.
    pub quarter_distance: Option<f64>,
    /// `ln(p + q√N)` when the cross-check ran.
    pub convergent_log: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegulatorValue {
    pub value: f64,
    pub kind: RegulatorKind,
    /// The multiplier `k` in `value = k·R⁺`, when known.
    pub multiplier_hint: Option<u64>,
    pub traversal: Option<TraversalInfo>,
}

impl RegulatorValue {
    /// True when `value` is `R⁺` itself.
    pub fn is_exact(&self) -> bool {
        self.kind == RegulatorKind::ExactTraversal || self.multiplier_hint == Some(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraverseOptions {
    pub step_cap: Option<u64>,
    /// Walks longer than this skip the convergent cross-check.
    pub cross_check_limit: u64,
}

impl Default for TraverseOptions {
    fn default() -> Self {
        TraverseOptions {
            step_cap: None,
            cross_check_limit: DEFAULT_CROSS_CHECK_LIMIT,
        }
    }
}

/// Distances `d_0 = 0, d_1, …` after each step of the cycle, in words.
fn word_walk(w: &mut WordCf, steps: u64, mut visit: impl FnMut(u64, f64)) -> f64 {
    let sqrt_n = libm::sqrt(w.n as f64);
    let mut acc = DistanceSum::new();
    for m in 0..steps {
        w.advance();
        // δ(Υ_m, Υ_{m+1}) depends on P_{m+1} and N − P_{m+1}² = Q_m Q_{m+1}.
        acc.add(step_distance_u64(w.p, w.n - w.p * w.p, sqrt_n));
        visit(m + 1, acc.value());
    }
    acc.value()
}

fn big_walk(n: &BigUint, steps: u64, mut visit: impl FnMut(u64, f64)) -> Result<f64> {
    let disc = BigInt::from(n.clone()) << 2u32;
    let sqrt_disc = Scaled::sqrt_of(disc.magnitude());
    let mut state = QuadIrrState::sqrt_start(n)?;
    let mut acc = DistanceSum::new();
    for m in 0..steps {
        let (_, next) = state.step();
        let b: BigInt = next.p() << 1u32;
        acc.add(step_distance(&b, &disc, sqrt_disc));
        visit(m + 1, acc.value());
        state = next;
    }
    Ok(acc.value())
}

/// `R⁺(n)` by summing the step distances around the principal cycle.
pub fn regulator_traverse(n: &BigUint) -> Result<RegulatorValue> {
    regulator_traverse_with(n, &TraverseOptions::default())
}

pub fn regulator_traverse_with(n: &BigUint, options: &TraverseOptions) -> Result<RegulatorValue> {
    let root = nonsquare_root(n)?;
    let tau = crate::cf::period_length(n, Some(options.step_cap.unwrap_or_else(|| default_step_cap(n))))?;
    let parity = Parity::of(tau);
    let steps = match parity {
        Parity::Even => tau,
        Parity::Odd => 2 * tau,
    };
    let (half_at, quarter_at) = match parity {
        Parity::Even => (tau / 2, None),
        Parity::Odd => (tau, Some((tau - 1) / 2)),
    };
    let mut half = 0.0;
    let mut quarter = quarter_at.map(|_| 0.0);
    let visit = |m: u64, d: f64| {
        if m == half_at {
            half = d;
        }
        if Some(m) == quarter_at {
            quarter = Some(d);
        }
    };
    let total = match WordCf::new(n, &root) {
        Some(mut w) => word_walk(&mut w, steps, visit),
        None => big_walk(n, steps, visit)?,
    };

    let convergent_log = if steps <= options.cross_check_limit {
        let exp = expand_sqrt(n, Some(tau + 1))?;
        let sol = exp.fundamental_solution();
        let log = ln_p_plus_q_sqrt(sol.p.magnitude(), sol.q.magnitude(), n);
        if libm::fabs(total - log) > CROSS_CHECK_TOLERANCE * log {
            return Err(Error::RegulatorMismatch {
                traversal: total,
                convergent: log,
            });
        }
        Some(log)
    } else {
        None
    };

    Ok(RegulatorValue {
        value: total,
        kind: RegulatorKind::ExactTraversal,
        multiplier_hint: Some(1),
        traversal: Some(TraversalInfo {
            tau,
            steps,
            half_distance: half,
            quarter_distance: quarter,
            convergent_log,
        }),
    })
}

fn external(r: f64, hint: Option<u64>) -> Result<RegulatorValue> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::NonPositiveRegulator);
    }
    Ok(RegulatorValue {
        value: r,
        kind: RegulatorKind::ExternalMultiple,
        multiplier_hint: hint,
        traversal: None,
    })
}

/// Wraps an externally obtained `k·R⁺(n)` with `k` unknown.
pub fn accept_external(n: &BigUint, r_prime: f64) -> Result<RegulatorValue> {
    nonsquare_root(n)?;
    external(r_prime, None)
}

/// Wraps an externally obtained value that is known to be `R⁺(n)` itself.
pub fn accept_external_exact(n: &BigUint, r: f64) -> Result<RegulatorValue> {
    nonsquare_root(n)?;
    external(r, Some(1))
}

/// Upper bound `6·√Δ·(½ ln Δ + 1)` on `R⁺(n)`, `Δ = 4n`.
pub fn regulator_upper_bound(n: &BigUint) -> f64 {
    let ln_disc = ln_biguint(n) + 2.0 * core::f64::consts::LN_2;
    6.0 * libm::exp(0.5 * ln_disc) * (0.5 * ln_disc + 1.0)
}

/// The forms `Υ_0 … Υ_{L−1}` of the principal cycle with their distances,
/// `L = τ` or `2τ`, followed by `Υ_L = Υ_0` at distance `R⁺`.
pub fn principal_cycle(n: &BigUint, step_cap: Option<u64>) -> Result<Vec<DistForm>> {
    let exp = expand_sqrt(n, step_cap)?;
    let len = exp.pell_index() + 1;
    let disc = BigInt::from(n.clone()) << 2u32;
    let sqrt_disc = Scaled::sqrt_of(disc.magnitude());
    let mut out = Vec::with_capacity(len + 1);
    let mut acc = DistanceSum::new();
    for m in 0..=len {
        let signed = |k: usize, x: &BigUint| {
            let v = BigInt::from(x.clone());
            if k % 2 == 0 {
                v
            } else {
                -v
            }
        };
        let form = QForm {
            a: signed(m, exp.q(m)),
            b: BigInt::from(exp.p(m + 1).clone()) << 1u32,
            c: signed(m + 1, exp.q(m + 1)),
        };
        let step = step_distance(&form.b, &disc, sqrt_disc);
        out.push(DistForm::new(form, acc.value()));
        acc.add(step);
    }
    debug_assert!(out.last().is_some_and(|f| f.form.a.magnitude().is_one()));
    Ok(out)
}

/// `⌈log₂ x⌉`, and 0 for `x ≤ 1`.
pub(crate) fn log2_ceil(x: f64) -> u32 {
    if x <= 1.0 {
        0
    } else {
        libm::ceil(libm::log2(x)).to_u32().unwrap_or(u32::MAX)
    }
}
