//! Primality testing and bounded trial division.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bases that make Miller–Rabin deterministic below `3.3·10²⁴`.
const FIXED_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Extra random bases used once `n ≥ 2⁶⁴`.
const RANDOM_ROUNDS: usize = 16;

fn is_sprp(n: &BigUint, n_minus_1: &BigUint, d: &BigUint, s: u64, base: &BigUint) -> bool {
    let mut x = base.modpow(d, n);
    if x.is_one() || x == *n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == *n_minus_1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Strong probable-prime test.
///
/// Deterministic for every `n < 2⁶⁴`; above that the fixed bases are
/// followed by pseudo-random ones drawn from a generator seeded by `n`, so
/// the answer is reproducible.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
        for &p in &FIXED_BASES {
            if small == p {
                return true;
            }
            if small % p == 0 {
                return false;
            }
        }
    } else if FIXED_BASES.iter().any(|&p| (n % p).is_zero()) {
        return false;
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    for &b in &FIXED_BASES {
        if !is_sprp(n, &n_minus_1, &d, s, &BigUint::from(b)) {
            return false;
        }
    }
    if n.bits() > 64 {
        let seed = n.iter_u64_digits().fold(0u64, |acc, w| acc.rotate_left(7) ^ w);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let span = n - 3u32;
        for _ in 0..RANDOM_ROUNDS {
            let raw = BigUint::from(rng.next_u64()) << 64u32 | BigUint::from(rng.next_u64());
            let base = raw % &span + 2u32;
            if !is_sprp(n, &n_minus_1, &d, s, &base) {
                return false;
            }
        }
    }
    true
}

/// Result of dividing out every prime up to a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialDivision {
    /// `(prime, exponent)` in increasing order.
    pub factors: Vec<(u64, u32)>,
    /// What is left after removing those primes; free of primes `≤ bound`.
    pub cofactor: BigUint,
    /// True when the cofactor is 1 or prime, so `factors` plus the
    /// cofactor is the full factorization.
    pub complete: bool,
}

impl TrialDivision {
    /// All prime factors, including a prime cofactor, without multiplicity.
    pub fn primes(&self) -> Vec<BigUint> {
        let mut out: Vec<BigUint> = self.factors.iter().map(|&(p, _)| BigUint::from(p)).collect();
        if self.complete && !self.cofactor.is_one() {
            out.push(self.cofactor.clone());
        }
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.complete && self.factors.iter().all(|&(_, e)| e == 1)
    }
}

fn push_factor(factors: &mut Vec<(u64, u32)>, p: u64, e: u32) {
    if e > 0 {
        factors.push((p, e));
    }
}

/// Divides out the primes `≤ bound`, stopping early once `p² > cofactor`.
pub fn trial_factor(n: &BigUint, bound: u64) -> TrialDivision {
    let mut factors = Vec::new();
    if n.is_zero() {
        return TrialDivision {
            factors,
            cofactor: BigUint::zero(),
            complete: false,
        };
    }
    let mut rest = n.clone();
    let mut exhausted_small = false;

    let mut e = 0;
    while rest.is_even() && !rest.is_zero() {
        rest >>= 1u32;
        e += 1;
    }
    if bound >= 2 {
        push_factor(&mut factors, 2, e);
    }

    if let Some(mut w) = rest.to_u64() {
        let mut p = 3u64;
        while p <= bound && p.saturating_mul(p) <= w {
            let mut e = 0;
            while w % p == 0 {
                w /= p;
                e += 1;
            }
            push_factor(&mut factors, p, e);
            p += 2;
        }
        exhausted_small = p.saturating_mul(p) > w;
        rest = BigUint::from(w);
    } else {
        let mut p = 3u64;
        while p <= bound {
            let pb = BigUint::from(p);
            if &pb * &pb > rest {
                exhausted_small = true;
                break;
            }
            let mut e = 0;
            loop {
                let (q, r) = rest.div_rem(&pb);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            push_factor(&mut factors, p, e);
            p += 2;
        }
    }
    // `exhausted_small` means every prime up to √rest was tried, so the
    // cofactor is 1 or prime without further testing.
    let complete = rest.is_one() || exhausted_small || is_probable_prime(&rest);
    TrialDivision {
        factors,
        cofactor: rest,
        complete,
    }
}
