//! Period parity and central-term predictions from congruences alone.
//!
//! Nothing here expands a continued fraction: the verdicts come from the
//! residues of the prime factors of `n` (found by bounded trial division or
//! supplied by the caller), the Jacobi symbol and the rational quartic
//! symbol. `Unknown` is always a safe answer.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::primes::{is_probable_prime, trial_factor};

/// Limiting share of odd periods among squarefree `n` free of primes
/// `≡ 3 (mod 4)`: `1 − ∏_{j odd}(1 − 2^{−j})`.
pub const ODD_PERIOD_DENSITY: f64 = 0.58057755882049;

/// Default trial-division bound for locating prime factors.
pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

/// Jacobi symbol `(a/n)` for odd `n ≥ 3`.
pub fn jacobi(a: &BigInt, n: &BigUint) -> Result<i8> {
    if n.is_even() || *n < BigUint::from(3u8) {
        return Err(Error::BadJacobiModulus);
    }
    let mut n = n.clone();
    let mut a = a.mod_floor(&BigInt::from(n.clone())).magnitude().clone();
    let mut sign = 1i8;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n_mod_8 = (&n % 8u8).to_u8().unwrap_or(0);
        if tz % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
            sign = -sign;
        }
        core::mem::swap(&mut a, &mut n);
        let a_mod_4 = (&a % 4u8).to_u8().unwrap_or(0);
        let n_mod_4 = (&n % 4u8).to_u8().unwrap_or(0);
        if a_mod_4 == 3 && n_mod_4 == 3 {
            sign = -sign;
        }
        a %= &n;
    }
    Ok(if n.is_one() { sign } else { 0 })
}

/// The rational quartic symbol `(p/q)₄ = p^{(q−1)/4} mod q` as `±1`.
///
/// Requires distinct primes `p ≡ q ≡ 1 (mod 4)` with `(p/q) = 1`.
pub fn quartic_symbol(p: &BigUint, q: &BigUint) -> Result<i8> {
    if p == q {
        return Err(Error::QuarticPrecondition("p and q must differ"));
    }
    let one_mod_4 = |x: &BigUint| (x % 4u8).is_one();
    if !one_mod_4(p) || !one_mod_4(q) {
        return Err(Error::QuarticPrecondition("p and q must be 1 mod 4"));
    }
    if !is_probable_prime(p) || !is_probable_prime(q) {
        return Err(Error::QuarticPrecondition("p and q must be prime"));
    }
    if jacobi(&BigInt::from(p.clone()), q)? != 1 {
        return Err(Error::QuarticPrecondition("p must be a square mod q"));
    }
    let e = (q - 1u8) >> 2u32;
    let v = p.modpow(&e, q);
    if v.is_one() {
        Ok(1)
    } else if v == q - 1u8 {
        Ok(-1)
    } else {
        Err(Error::QuarticPrecondition("p^((q-1)/4) is not +-1 mod q"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ParityVerdict {
    Even,
    Odd,
    Unknown,
}

/// Which sufficient condition settled a parity verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ParityRule {
    /// A prime `≡ 3 (mod 4)` divides `n`, so `x² − ny² = −1` is insoluble.
    PrimeThreeModFour,
    /// `n = pq`, `p ≡ q ≡ 1 (mod 4)`, `(p/q) = −1`.
    NonResiduePair,
    /// `n = pq`, `p ≡ q ≡ 1 (mod 4)`, `(p/q) = 1`, `(p/q)₄(q/p)₄ = −1`.
    QuarticProduct,
    NoCriterion,
}

impl ParityRule {
    pub fn tag(self) -> &'static str {
        match self {
            ParityRule::PrimeThreeModFour => "prime-3-mod-4",
            ParityRule::NonResiduePair => "non-residue-pair",
            ParityRule::QuarticProduct => "quartic-product",
            ParityRule::NoCriterion => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParityPrediction {
    pub verdict: ParityVerdict,
    pub rule: ParityRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CentralVerdict {
    /// Even period and `Q_{τ/2} ∉ {1, 2}`, so `gcd(Q_{τ/2}, n)` is a divisor.
    NontrivialGuaranteed,
    /// Even period with `Q_{τ/2} = 2`.
    CentralIsTwo,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CentralRule {
    /// `n ≡ 1 (mod 4)` with a prime factor `≡ 3 (mod 4)`.
    OneModFourWithThreeModFour,
    /// `n ≡ 1 (mod 4)` and the period is even by the quartic criterion.
    OneModFourEvenPeriod,
    /// Prime factors `p ≡ 5 (mod 8)` and `q ≡ 3 (mod 4)`.
    FiveModEightWithThreeModFour,
    /// `n = pq`, `p ≡ 1 (mod 8)`, `q ≡ 3 (mod 4)`, `(p/q) = −1`.
    OneModEightNonResidue,
    NoCriterion,
}

impl CentralRule {
    pub fn tag(self) -> &'static str {
        match self {
            CentralRule::OneModFourWithThreeModFour => "1-mod-4-with-prime-3-mod-4",
            CentralRule::OneModFourEvenPeriod => "1-mod-4-even-period",
            CentralRule::FiveModEightWithThreeModFour => "prime-5-mod-8-and-3-mod-4",
            CentralRule::OneModEightNonResidue => "pq-1-mod-8-non-residue",
            CentralRule::NoCriterion => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CentralPrediction {
    pub verdict: CentralVerdict,
    pub rule: CentralRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyConfig {
    pub trial_bound: u64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            trial_bound: DEFAULT_TRIAL_BOUND,
        }
    }
}

/// What is known about the prime factors of `n`.
struct FactorInfo {
    /// Distinct primes known to divide `n`.
    primes: Vec<BigUint>,
    /// `Some((p, q))` when `n = pq` with distinct primes.
    semiprime: Option<(BigUint, BigUint)>,
}

fn residue(x: &BigUint, m: u8) -> u8 {
    (x % m).to_u8().unwrap_or(0)
}

fn gather(n: &BigUint, known: Option<(&BigUint, &BigUint)>, config: &ClassifyConfig) -> FactorInfo {
    if let Some((p, q)) = known {
        if p != q && &(p * q) == n && is_probable_prime(p) && is_probable_prime(q) {
            return FactorInfo {
                primes: alloc::vec![p.clone(), q.clone()],
                semiprime: Some((p.clone(), q.clone())),
            };
        }
    }
    let td = trial_factor(n, config.trial_bound);
    let primes = td.primes();
    let semiprime = (td.is_squarefree() && primes.len() == 2).then(|| (primes[0].clone(), primes[1].clone()));
    FactorInfo { primes, semiprime }
}

fn parity_from(info: &FactorInfo) -> ParityPrediction {
    if info.primes.iter().any(|p| residue(p, 4) == 3) {
        return ParityPrediction {
            verdict: ParityVerdict::Even,
            rule: ParityRule::PrimeThreeModFour,
        };
    }
    if let Some((p, q)) = &info.semiprime {
        if residue(p, 4) == 1 && residue(q, 4) == 1 {
            let leg = jacobi(&BigInt::from(p.clone()), q).unwrap_or(0);
            if leg == -1 {
                return ParityPrediction {
                    verdict: ParityVerdict::Odd,
                    rule: ParityRule::NonResiduePair,
                };
            }
            if leg == 1 {
                if let (Ok(x), Ok(y)) = (quartic_symbol(p, q), quartic_symbol(q, p)) {
                    if x * y == -1 {
                        return ParityPrediction {
                            verdict: ParityVerdict::Even,
                            rule: ParityRule::QuarticProduct,
                        };
                    }
                }
            }
        }
    }
    ParityPrediction {
        verdict: ParityVerdict::Unknown,
        rule: ParityRule::NoCriterion,
    }
}

fn central_from(n: &BigUint, info: &FactorInfo) -> CentralPrediction {
    let guaranteed = |rule| CentralPrediction {
        verdict: CentralVerdict::NontrivialGuaranteed,
        rule,
    };
    let has = |m: u8, r: u8| info.primes.iter().any(|p| residue(p, m) == r);
    if residue(n, 4) == 1 {
        if has(4, 3) {
            return guaranteed(CentralRule::OneModFourWithThreeModFour);
        }
        // x² − ny² = ±2 has no solution for n ≡ 1 (mod 4), so an even
        // period always has a central term other than 1 and 2.
        if parity_from(info).verdict == ParityVerdict::Even {
            return guaranteed(CentralRule::OneModFourEvenPeriod);
        }
    }
    if has(8, 5) && has(4, 3) {
        return guaranteed(CentralRule::FiveModEightWithThreeModFour);
    }
    if let Some((p, q)) = &info.semiprime {
        for (x, y) in [(p, q), (q, p)] {
            if residue(x, 8) == 1 && residue(y, 4) == 3 && jacobi(&BigInt::from(x.clone()), y) == Ok(-1) {
                return CentralPrediction {
                    verdict: CentralVerdict::CentralIsTwo,
                    rule: CentralRule::OneModEightNonResidue,
                };
            }
        }
    }
    CentralPrediction {
        verdict: CentralVerdict::Unknown,
        rule: CentralRule::NoCriterion,
    }
}

/// Parity of the period of `√n`, when a sufficient condition applies.
pub fn predict_parity(n: &BigUint, known_factors: Option<(&BigUint, &BigUint)>) -> ParityPrediction {
    predict_parity_with(n, known_factors, &ClassifyConfig::default())
}

pub fn predict_parity_with(
    n: &BigUint,
    known_factors: Option<(&BigUint, &BigUint)>,
    config: &ClassifyConfig,
) -> ParityPrediction {
    parity_from(&gather(n, known_factors, config))
}

/// Whether the central coefficient `Q_{τ/2}` is guaranteed to reveal a
/// factor, or is known to be 2.
pub fn predict_central(n: &BigUint, known_factors: Option<(&BigUint, &BigUint)>) -> CentralPrediction {
    predict_central_with(n, known_factors, &ClassifyConfig::default())
}

pub fn predict_central_with(
    n: &BigUint,
    known_factors: Option<(&BigUint, &BigUint)>,
    config: &ClassifyConfig,
) -> CentralPrediction {
    central_from(n, &gather(n, known_factors, config))
}

/// Both predictions from a single factor search.
pub fn classify(
    n: &BigUint,
    known_factors: Option<(&BigUint, &BigUint)>,
    config: &ClassifyConfig,
) -> (ParityPrediction, CentralPrediction) {
    let info = gather(n, known_factors, config);
    (parity_from(&info), central_from(n, &info))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    /// Euler's criterion for prime moduli, used as the oracle.
    fn euler(a: i64, p: u64) -> i8 {
        let a = a.rem_euclid(p as i64) as u64;
        if a == 0 {
            return 0;
        }
        let v = big(a).modpow(&big((p - 1) / 2), &big(p));
        if v.is_one() {
            1
        } else {
            -1
        }
    }

    #[test]
    fn worked_symbol_values() {
        assert_eq!(jacobi(&5.into(), &big(89)).unwrap(), 1);
        assert_eq!(jacobi(&17.into(), &big(43)).unwrap(), 1);
        for n in (3..200u64).step_by(2) {
            assert_eq!(jacobi(&1.into(), &big(n)).unwrap(), 1);
        }
    }

    #[test]
    fn jacobi_matches_euler_and_multiplicativity() {
        let primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
        for &p in &primes {
            for a in -60i64..60 {
                assert_eq!(jacobi(&a.into(), &big(p)).unwrap(), euler(a, p), "({a}/{p})");
            }
        }
        for &p in &primes {
            for &q in &primes {
                for a in -30i64..30 {
                    let want = euler(a, p) * euler(a, q);
                    assert_eq!(jacobi(&a.into(), &big(p * q)).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn jacobi_rejects_bad_modulus() {
        assert_eq!(jacobi(&3.into(), &big(10)), Err(Error::BadJacobiModulus));
        assert_eq!(jacobi(&3.into(), &big(1)), Err(Error::BadJacobiModulus));
    }

    /// Brute-force fourth-power test: `a` is a fourth power mod `p`.
    fn is_fourth_power(a: u64, p: u64) -> bool {
        (1..p).any(|x| x * x % p * x % p * x % p == a % p)
    }

    #[test]
    fn quartic_values() {
        let s = |p: u64, q: u64| quartic_symbol(&big(p), &big(q)).unwrap();
        assert_eq!(s(13, 53) * s(53, 13), 1);
        // 5 is not a fourth power mod 29 and 29 ≡ 4 is not one mod 5.
        assert!(!is_fourth_power(5, 29) && !is_fourth_power(29, 5));
        assert_eq!((s(5, 29), s(29, 5)), (-1, -1));
        assert_eq!(s(5, 29) * s(29, 5), 1);
        for (p, q) in [(5u64, 29u64), (13, 17), (5, 89), (89, 5), (13, 53), (53, 13)] {
            if jacobi(&(p as i64).into(), &big(q)).unwrap() == 1 {
                let want = if is_fourth_power(p, q) { 1 } else { -1 };
                assert_eq!(s(p, q), want, "({p}/{q})_4");
                assert_eq!(s(p, q) * s(p, q), 1);
            }
        }
    }

    #[test]
    fn quartic_preconditions() {
        assert!(quartic_symbol(&big(5), &big(5)).is_err());
        assert!(quartic_symbol(&big(3), &big(13)).is_err());
        assert!(quartic_symbol(&big(5), &big(13)).is_err()); // (5/13) = −1
        assert!(quartic_symbol(&big(25), &big(29)).is_err()); // 25 is not prime
    }

    #[test]
    fn worked_classifications() {
        let p = predict_parity(&big(15725), None);
        assert_eq!(p.verdict, ParityVerdict::Unknown);
        let p = predict_parity(&big(21), None);
        assert_eq!(
            (p.verdict, p.rule),
            (ParityVerdict::Even, ParityRule::PrimeThreeModFour)
        );
        assert_eq!(predict_parity(&big(445), None).verdict, ParityVerdict::Unknown);
        assert_eq!(predict_central(&big(731), None).verdict, CentralVerdict::Unknown);
        assert_eq!(
            predict_central(&big(21), None).verdict,
            CentralVerdict::NontrivialGuaranteed
        );
        let (par, cen) = classify(&big(11021), None, &ClassifyConfig::default());
        assert_eq!(par.verdict, ParityVerdict::Even);
        assert_eq!(cen.verdict, CentralVerdict::NontrivialGuaranteed);
    }

    #[test]
    fn known_factors_bypass_trial_division() {
        let cfg = ClassifyConfig { trial_bound: 2 };
        let n = big(103 * 107);
        let (p, q) = (big(103), big(107));
        assert_eq!(predict_parity_with(&n, None, &cfg).verdict, ParityVerdict::Unknown);
        assert_eq!(
            predict_parity_with(&n, Some((&p, &q)), &cfg).verdict,
            ParityVerdict::Even
        );
        // Inconsistent hints are ignored.
        assert_eq!(
            predict_parity_with(&n, Some((&p, &p)), &cfg).verdict,
            ParityVerdict::Unknown
        );
    }

    #[test]
    fn central_is_two_rule() {
        // 17 ≡ 1 (mod 8), 3 ≡ 3 (mod 4), (17/3) = −1.
        let c = predict_central(&big(51), None);
        assert_eq!(c.verdict, CentralVerdict::CentralIsTwo);
    }
}
