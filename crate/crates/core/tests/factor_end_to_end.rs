mod common;

use common::{factorize, odd_nonsquare, oracle_cf};
use num_bigint::BigUint;
use regfac_core::factor::{algorithm1, algorithm2, resolve_multiple, FactorResult};
use regfac_core::regulator::{accept_external, regulator_traverse};
use regfac_core::{factor, Error, FactorConfig, RegulatorSource};

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

#[test]
fn dispatcher_examples() {
    let cfg = FactorConfig::default();
    assert_eq!(factor(&big(9), &cfg), Err(Error::PerfectSquare));
    assert_eq!(factor(&big(101), &cfg), Err(Error::ProbablePrime));
    for (n, divisors) in [(21u64, vec![3u64, 7]), (15, vec![3, 5]), (11021, vec![103, 107])] {
        let out = factor(&big(n), &cfg).unwrap();
        let d = out.result.factor().expect("factor");
        assert!(divisors.iter().any(|&x| big(x) == *d), "n = {n}: {d}");
    }
    let out = factor(&big(65), &cfg).unwrap();
    assert_eq!(out.result, FactorResult::Inapplicable);
    let out = factor(&big(731), &cfg).unwrap();
    assert_eq!(out.result, FactorResult::Inapplicable);
}

#[test]
fn worked_example_15725() {
    let n = big(15725);
    let out = factor(&n, &FactorConfig::default()).unwrap();
    let d = out.result.factor().unwrap().clone();
    let d = u64::try_from(d).unwrap();
    let primes: Vec<u64> = factorize(15725).into_iter().map(|(p, _)| p).collect();
    assert!(primes.iter().any(|p| d % p == 0));
    assert_eq!(15725 % d, 0);
}

#[test]
fn external_regulator_paths() {
    let n = big(11021);
    let r = regulator_traverse(&n).unwrap().value;
    for source in [RegulatorSource::Exact(r), RegulatorSource::Multiple(2.0 * r)] {
        let cfg = FactorConfig {
            regulator: source,
            ..FactorConfig::default()
        };
        let out = factor(&n, &cfg).unwrap();
        let d = out.result.factor().unwrap();
        assert!(*d == big(103) || *d == big(107));
    }
}

/// R⁺(11021) = 13.96 is below (ln 11021)² = 86.4, so the dispatcher scans;
/// the giant-step search works all the same when called directly.
#[test]
fn giant_steps_on_small_regulator() {
    let n = big(11021);
    let r = regulator_traverse(&n).unwrap();
    let out = algorithm2(&n, &r, None).unwrap();
    assert!(out.result.factor().is_some());
    for k in [1.0, 2.0, 4.0] {
        let m = accept_external(&n, k * r.value).unwrap();
        let out = resolve_multiple(&n, &m, None).unwrap();
        let search = out.trace.search.unwrap();
        assert!(out.result.factor().is_some(), "k = {k}");
        let bound = k.log2().ceil() as u32 + 1;
        assert!(search.halvings <= bound);
    }
}

/// Whenever the central term of an even period is neither 1 nor 2, the
/// dispatcher finds a factor.
#[test]
fn even_period_completeness_below_20000() {
    let cfg = FactorConfig::default();
    for n in odd_nonsquare(20_000) {
        let o = oracle_cf(n, 1);
        if o.tau % 2 == 1 || matches!(o.q[o.tau / 2], 1 | 2) {
            continue;
        }
        let out = factor(&big(n), &cfg).unwrap();
        let d = out.result.factor().unwrap_or_else(|| panic!("n = {n}"));
        let d = u64::try_from(d.clone()).unwrap();
        assert!(d > 1 && d < n && n % d == 0);
    }
}

#[test]
fn scan_factors_are_divisors() {
    for n in odd_nonsquare(20_000) {
        if common::is_prime(n) {
            continue;
        }
        let r = regulator_traverse(&big(n)).unwrap();
        let ln = (n as f64).ln();
        if r.value > ln * ln {
            continue;
        }
        let out = algorithm1(&big(n), &r, None).unwrap();
        if let Some(d) = out.result.factor() {
            let d = u64::try_from(d.clone()).unwrap();
            let pf = factorize(n);
            assert!(pf.iter().any(|&(p, _)| d % p == 0) && n % d == 0, "n = {n}");
        }
    }
}

/// The greedy accumulation lands within its proven gap of the target, and
/// squarings stay within `⌈log₂ target⌉`.
#[test]
fn greedy_gap_and_squaring_bounds() {
    let mut rng = common::rng(11);
    let mut checked = 0;
    while checked < 40 {
        let p = common::random_prime(&mut rng, 1 << 13, 1 << 16, 4, 3);
        let q = common::random_prime(&mut rng, 1 << 13, 1 << 16, 4, 3);
        let n = p * q;
        if p == q {
            continue;
        }
        let reg = regulator_traverse(&big(n)).unwrap();
        let ln = (n as f64).ln();
        if reg.value <= ln * ln {
            continue;
        }
        let out = algorithm2(&big(n), &reg, None).unwrap();
        assert!(out.result.factor().is_some(), "n = {n}");
        for b in &out.trace.search.unwrap().rounds[0].branches {
            assert!(b.greedy_gap >= 0.0 && b.greedy_gap <= b.greedy_bound, "n = {n}: {b:?}");
            assert!(b.t <= b.t_bound && b.steps <= b.psi);
        }
        checked += 1;
    }
}
