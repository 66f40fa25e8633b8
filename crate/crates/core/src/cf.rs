//! Continued fraction expansion of `√N` and the sequences that come with it.
//!
//! The expansion of `α₀ = (P₀ + √N)/Q₀` runs the recurrence
//!
//! ```text
//! a_m     = ⌊(P_m + √N)/Q_m⌋
//! P_{m+1} = a_m·Q_m − P_m
//! Q_{m+1} = (N − P_{m+1}²)/Q_m
//! ```
//!
//! entirely in integers: `⌊(P + √N)/Q⌋` is obtained from `⌊√N⌋` with a
//! sign-aware floor division. For the `√N` start (`P₀ = 0`, `Q₀ = 1`) the
//! period `τ` is the first `m ≥ 1` with `Q_m = 1`.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{isqrt, perfect_square_root};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(tau: u64) -> Self {
        if tau % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Checks `n > 1` and `n` nonsquare; returns `⌊√n⌋`.
pub(crate) fn nonsquare_root(n: &BigUint) -> Result<BigUint> {
    if *n < BigUint::from(2u8) {
        return Err(Error::TooSmall { min: 1 });
    }
    if perfect_square_root(n).is_some() {
        return Err(Error::PerfectSquare);
    }
    Ok(isqrt(n))
}

/// Kraitchik's bound `⌈0.72·√N·ln N⌉` plus two.
pub fn default_step_cap(n: &BigUint) -> u64 {
    let ln_n = crate::arith::ln_biguint(n);
    let bound = libm::ceil(0.72 * libm::exp(0.5 * ln_n) * ln_n);
    if bound.is_finite() && bound < (u64::MAX - 2) as f64 {
        bound as u64 + 2
    } else {
        u64::MAX
    }
}

/// State `(P_m, Q_m)` of the expansion of `(P + √N)/Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadIrrState {
    n: BigUint,
    root: BigInt,
    p: BigInt,
    q: BigInt,
    index: u64,
}

impl QuadIrrState {
    /// A general start `(P₀ + √N)/Q₀`; requires `Q₀ ≠ 0` and `Q₀ | N − P₀²`.
    pub fn new(n: &BigUint, p: BigInt, q: BigInt) -> Result<Self> {
        let root = nonsquare_root(n)?;
        if q.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let nn = BigInt::from(n.clone());
        if !(&nn - &p * &p).is_multiple_of(&q) {
            return Err(Error::NotDivisible);
        }
        Ok(QuadIrrState {
            n: n.clone(),
            root: root.into(),
            p,
            q,
            index: 0,
        })
    }

    /// `√N` itself: `P₀ = 0`, `Q₀ = 1`.
    pub fn sqrt_start(n: &BigUint) -> Result<Self> {
        Self::new(n, BigInt::zero(), BigInt::one())
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// `⌊(P + √N)/Q⌋`, exactly.
    pub fn partial_quotient(&self) -> BigInt {
        let num = &self.p + &self.root;
        if self.q.sign() == Sign::Plus {
            num.div_floor(&self.q)
        } else {
            // √N is irrational, so (P + √N)/|Q| is never an integer:
            // ⌊−y⌋ = −⌊y⌋ − 1.
            let pos = num.div_floor(&-&self.q);
            -pos - 1
        }
    }

    fn advance(&mut self) -> BigInt {
        let a = self.partial_quotient();
        let p_next = &a * &self.q - &self.p;
        let nn = BigInt::from(self.n.clone());
        let q_next = (nn - &p_next * &p_next) / &self.q;
        self.p = p_next;
        self.q = q_next;
        self.index += 1;
        a
    }

    /// One step of the recurrence: `(a_m, state_{m+1})`.
    pub fn step(&self) -> (BigInt, QuadIrrState) {
        let mut next = self.clone();
        let a = next.advance();
        (a, next)
    }

    /// Endless stream of `(a_m, state_{m+1})`.
    pub fn iter(&self) -> CfIter {
        CfIter { state: self.clone() }
    }
}

/// One step of the expansion; see [`QuadIrrState::step`].
///
/// Fails only if `state` was not built through [`QuadIrrState::new`], which
/// cannot happen from outside the crate, so this mirrors `step` with a
/// `Result` for API symmetry with the other operations.
pub fn cf_step(state: &QuadIrrState) -> Result<(BigInt, QuadIrrState)> {
    if state.q.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(state.step())
}

#[derive(Debug, Clone)]
pub struct CfIter {
    state: QuadIrrState,
}

impl CfIter {
    pub fn state(&self) -> &QuadIrrState {
        &self.state
    }
}

impl Iterator for CfIter {
    type Item = (BigInt, QuadIrrState);

    fn next(&mut self) -> Option<Self::Item> {
        let a = self.state.advance();
        Some((a, self.state.clone()))
    }
}

/// `(p_m, q_m)`, the `m`-th convergent of `√N`; `m ≥ −1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
    pub index: i64,
}

impl Convergent {
    /// `p² − N q²`.
    pub fn norm(&self, n: &BigUint) -> BigInt {
        &self.p * &self.p - BigInt::from(n.clone()) * &self.q * &self.q
    }
}

/// Convergents driven by any stream of partial quotients `a₀, a₁, …`.
///
/// The first item is always `(p₋₁, q₋₁) = (1, 0)`.
#[derive(Debug, Clone)]
pub struct ConvergentStream<I> {
    quotients: I,
    prev: Convergent,
    cur: Option<Convergent>,
}

impl<I: Iterator<Item = BigInt>> ConvergentStream<I> {
    pub fn new(quotients: I) -> Self {
        ConvergentStream {
            quotients,
            prev: Convergent {
                p: BigInt::zero(),
                q: BigInt::one(),
                index: -2,
            },
            cur: None,
        }
    }
}

impl<I: Iterator<Item = BigInt>> Iterator for ConvergentStream<I> {
    type Item = Convergent;

    fn next(&mut self) -> Option<Convergent> {
        let out = match &self.cur {
            None => Convergent {
                p: BigInt::one(),
                q: BigInt::zero(),
                index: -1,
            },
            Some(cur) => {
                let a = self.quotients.next()?;
                Convergent {
                    p: &a * &cur.p + &self.prev.p,
                    q: &a * &cur.q + &self.prev.q,
                    index: cur.index + 1,
                }
            }
        };
        if let Some(cur) = self.cur.replace(out.clone()) {
            self.prev = cur;
        }
        Some(out)
    }
}

/// The periodic expansion `√N = [a₀; a₁, …, a_{τ−1}, 2a₀]` together with one
/// period of `P` and `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub n: BigUint,
    pub a0: BigUint,
    /// `a₁ … a_τ`; the last entry is `2a₀`.
    pub period_quotients: Vec<BigUint>,
    pub tau: u64,
    /// `P₀ … P_τ`.
    p_values: Vec<BigUint>,
    /// `Q₀ … Q_τ`.
    q_values: Vec<BigUint>,
}

impl Expansion {
    pub fn parity(&self) -> Parity {
        Parity::of(self.tau)
    }

    fn tau_usize(&self) -> usize {
        self.tau as usize
    }

    /// `a_m` for any `m ≥ 0`.
    pub fn quotient(&self, m: usize) -> &BigUint {
        if m == 0 {
            &self.a0
        } else {
            &self.period_quotients[(m - 1) % self.tau_usize()]
        }
    }

    /// `P_m` for any `m ≥ 0` (`P₀ = 0`, periodic from `m = 1`).
    pub fn p(&self, m: usize) -> &BigUint {
        if m == 0 {
            &self.p_values[0]
        } else {
            &self.p_values[(m - 1) % self.tau_usize() + 1]
        }
    }

    /// `Q_m` for any `m ≥ 0`.
    pub fn q(&self, m: usize) -> &BigUint {
        &self.q_values[m % self.tau_usize()]
    }

    /// Partial quotients `a₀, a₁, …` forever.
    pub fn quotients(&self) -> impl Iterator<Item = BigInt> + '_ {
        (0..).map(move |m| BigInt::from(self.quotient(m).clone()))
    }

    pub fn convergent_stream(&self) -> ConvergentStream<impl Iterator<Item = BigInt> + '_> {
        ConvergentStream::new(self.quotients())
    }

    /// Convergents `m = −1 … count − 2`.
    pub fn convergents(&self, count: usize) -> Vec<Convergent> {
        self.convergent_stream().take(count).collect()
    }

    /// Index of the fundamental Pell solution: `τ − 1` or `2τ − 1`.
    pub fn pell_index(&self) -> usize {
        match self.parity() {
            Parity::Even => self.tau_usize() - 1,
            Parity::Odd => 2 * self.tau_usize() - 1,
        }
    }

    /// Least positive solution of `x² − N y² = 1`.
    pub fn fundamental_solution(&self) -> Convergent {
        let idx = self.pell_index();
        self.convergent_stream()
            .nth(idx + 1)
            .expect("convergent stream is infinite")
    }

    /// `Q_{τ/2}` for even periods.
    pub fn central_q(&self) -> Option<&BigUint> {
        match self.parity() {
            Parity::Even => Some(self.q(self.tau_usize() / 2)),
            Parity::Odd => None,
        }
    }
}

/// Expands `√n` until the period closes.
///
/// `step_cap` defaults to [`default_step_cap`].
pub fn expand_sqrt(n: &BigUint, step_cap: Option<u64>) -> Result<Expansion> {
    let root = nonsquare_root(n)?;
    let cap = step_cap.unwrap_or_else(|| default_step_cap(n));
    let mut state = QuadIrrState::sqrt_start(n)?;
    let mut quotients = Vec::new();
    let mut p_values = alloc::vec![BigUint::zero()];
    let mut q_values = alloc::vec![BigUint::one()];
    loop {
        if quotients.len() as u64 >= cap {
            return Err(Error::StepCapExceeded { cap });
        }
        let a = state.advance();
        // For the √N start every a_m with m ≥ 1 and every P, Q is positive.
        if state.index > 1 {
            quotients.push(a.magnitude().clone());
        }
        p_values.push(state.p.magnitude().clone());
        q_values.push(state.q.magnitude().clone());
        if state.q.is_one() {
            break;
        }
    }
    // The quotient closing the period is a_τ = 2a₀; the loop stops before
    // computing it.
    quotients.push(&root << 1u32);
    let tau = quotients.len() as u64;
    Ok(Expansion {
        n: n.clone(),
        a0: root,
        period_quotients: quotients,
        tau,
        p_values,
        q_values,
    })
}

/// Convergents `m = −1 … count − 2` of `√n`, computed by stepping the
/// expansion directly (no period detection).
pub fn convergents(n: &BigUint, count: usize) -> Result<Vec<Convergent>> {
    let start = QuadIrrState::sqrt_start(n)?;
    let quotients = start.iter().map(|(a, _)| a);
    Ok(ConvergentStream::new(quotients).take(count).collect())
}

/// `N = Q_{(τ+1)/2}² + P_{(τ+1)/2}²` for odd periods.
pub fn sum_two_squares(n: &BigUint) -> Result<(BigUint, BigUint)> {
    let exp = expand_sqrt(n, None)?;
    if exp.parity() == Parity::Even {
        return Err(Error::EvenPeriod { tau: exp.tau });
    }
    let mid = exp.tau_usize().div_ceil(2);
    let a = exp.q(mid).clone();
    let b = exp.p(mid).clone();
    debug_assert_eq!(&a * &a + &b * &b, *n);
    Ok((a, b))
}

/// The `√N` expansion in machine words, valid for `N < 2⁶²`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct WordCf {
    pub n: u64,
    pub root: u64,
    pub p: u64,
    pub q: u64,
    pub q_prev: u64,
}

pub(crate) const WORD_LIMIT_BITS: u64 = 62;

impl WordCf {
    pub fn new(n: &BigUint, root: &BigUint) -> Option<Self> {
        if n.bits() > WORD_LIMIT_BITS {
            return None;
        }
        Some(WordCf {
            n: n.to_u64()?,
            root: root.to_u64()?,
            p: 0,
            q: 1,
            q_prev: 1,
        })
    }

    /// Moves to `(P_{m+1}, Q_{m+1})`.
    #[inline]
    pub fn advance(&mut self) {
        let a = (self.p + self.root) / self.q;
        let p_next = a * self.q - self.p;
        let q_next = (self.n - p_next * p_next) / self.q;
        self.p = p_next;
        self.q_prev = self.q;
        self.q = q_next;
    }
}

/// The period `τ` only, without storing the sequences.
pub fn period_length(n: &BigUint, step_cap: Option<u64>) -> Result<u64> {
    let root = nonsquare_root(n)?;
    let cap = step_cap.unwrap_or_else(|| default_step_cap(n));
    if let Some(mut w) = WordCf::new(n, &root) {
        let mut m = 0u64;
        loop {
            if m >= cap {
                return Err(Error::StepCapExceeded { cap });
            }
            w.advance();
            m += 1;
            if w.q == 1 {
                return Ok(m);
            }
        }
    }
    let mut state = QuadIrrState::sqrt_start(n)?;
    loop {
        if state.index >= cap {
            return Err(Error::StepCapExceeded { cap });
        }
        state.advance();
        if state.q.is_one() {
            return Ok(state.index);
        }
    }
}
