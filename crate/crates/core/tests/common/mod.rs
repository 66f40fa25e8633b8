//! Test-side oracles, written independently of the library code paths.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The expansion of `√n` by brute force: each partial quotient is the
/// largest `a` with `a·Q − P ≤ √n`, decided by squaring; the period is found
/// by waiting for the state `(P_1, Q_1)` to recur.
pub struct OracleCf {
    pub n: u64,
    pub tau: usize,
    /// `a_0 … a_{len−1}`.
    pub a: Vec<u64>,
    /// `P_0 … P_len`.
    pub p: Vec<u64>,
    /// `Q_0 … Q_len`.
    pub q: Vec<u64>,
}

fn below_root(x: i128, n: u64) -> bool {
    x < 0 || (x * x) as u128 <= n as u128
}

/// `periods` full periods plus one extra term of every sequence.
pub fn oracle_cf(n: u64, periods: usize) -> OracleCf {
    let (mut p, mut q) = (0i128, 1i128);
    let mut av = Vec::new();
    let mut pv = vec![0u64];
    let mut qv = vec![1u64];
    let mut first: Option<(i128, i128)> = None;
    let mut tau = 0usize;
    let mut m = 0usize;
    loop {
        // Start from a float guess and correct with exact comparisons.
        let guess = ((p as f64 + (n as f64).sqrt()) / q as f64).floor() as i128;
        let mut a = guess.max(0);
        while !below_root(a * q - p, n) {
            a -= 1;
        }
        while below_root((a + 1) * q - p, n) {
            a += 1;
        }
        av.push(a as u64);
        p = a * q - p;
        q = (n as i128 - p * p) / q;
        pv.push(p as u64);
        qv.push(q as u64);
        m += 1;
        match first {
            None => first = Some((p, q)),
            Some(s) if tau == 0 && (p, q) == s => tau = m - 1,
            _ => {}
        }
        if tau > 0 && m > periods * tau {
            break;
        }
    }
    OracleCf {
        n,
        tau,
        a: av,
        p: pv,
        q: qv,
    }
}

pub fn is_square(n: u64) -> bool {
    let r = (n as f64).sqrt() as u64;
    (r.saturating_sub(2)..=r + 2).any(|x| x * x == n)
}

pub fn odd_nonsquare(limit: u64) -> impl Iterator<Item = u64> {
    (3..limit).step_by(2).filter(|&n| !is_square(n))
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

/// `ln x` from the decimal expansion: leading 17 digits and the length.
pub fn ln_decimal(x: &BigUint) -> f64 {
    let s = x.to_string();
    let lead = &s[..s.len().min(17)];
    let v: f64 = lead.parse().unwrap();
    v.ln() + (s.len() - lead.len()) as f64 * std::f64::consts::LN_10
}

/// Convergents `p_{−1}, q_{−1}, p_0, …` of the quotient list.
pub fn oracle_convergents(a: &[u64]) -> Vec<(BigInt, BigInt)> {
    let mut out = vec![(BigInt::from(1), BigInt::from(0))];
    let (mut pp, mut qp) = (BigInt::from(0), BigInt::from(1));
    for &ai in a {
        let (p1, q1) = out.last().unwrap().clone();
        let p = BigInt::from(ai) * &p1 + &pp;
        let q = BigInt::from(ai) * &q1 + &qp;
        pp = p1;
        qp = q1;
        out.push((p, q));
    }
    out
}

/// `ln(x + y√n)` for the least solution of `x² − ny² = 1`, found by
/// searching the convergents for norm 1.
pub fn oracle_ln_pell(n: u64) -> f64 {
    let cf = oracle_cf(n, 2);
    let nn = BigInt::from(n);
    for (x, y) in oracle_convergents(&cf.a).into_iter().skip(1) {
        if &x * &x - &nn * &y * &y == BigInt::from(1) {
            let (xu, yu) = (x.magnitude().clone(), y.magnitude().clone());
            if xu.bits() < 50 {
                let (xf, yf) = (
                    xu.to_string().parse::<f64>().unwrap(),
                    yu.to_string().parse::<f64>().unwrap(),
                );
                return (xf + yf * (n as f64).sqrt()).ln();
            }
            // x + y√n = 2x − 1/(x + y√n); the correction is below 2⁻¹⁰⁰.
            return ln_decimal(&(xu << 1u32));
        }
    }
    unreachable!("Pell solution lies within two periods")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn range(rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> u64 {
    lo + rng.next_u64() % (hi - lo)
}

/// A random prime in `[lo, hi)` that is `r (mod m)`.
pub fn random_prime(rng: &mut ChaCha8Rng, lo: u64, hi: u64, m: u64, r: u64) -> u64 {
    loop {
        let x = range(rng, lo, hi);
        let x = x - x % m + r;
        if x >= lo && x < hi && is_prime(x) {
            return x;
        }
    }
}
