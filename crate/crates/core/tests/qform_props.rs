mod common;

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use regfac_core::cf::expand_sqrt;
use regfac_core::qform::{Discriminant, DistForm, QForm};
use regfac_core::regulator::principal_cycle;

fn cycle(n: u64) -> Vec<QForm> {
    let mut c: Vec<QForm> = principal_cycle(&BigUint::from(n), None)
        .unwrap()
        .into_iter()
        .map(|d| d.form)
        .collect();
    c.pop();
    c
}

fn signed(k: usize, x: &BigUint) -> BigInt {
    let v = BigInt::from(x.clone());
    if k % 2 == 0 {
        v
    } else {
        -v
    }
}

/// `ρ^m(Υ₀)` follows the `P`/`Q` sequences.
#[test]
fn rho_orbit_is_the_cf_sequence() {
    for n in common::odd_nonsquare(3000) {
        let nb = BigUint::from(n);
        let exp = expand_sqrt(&nb, None).unwrap();
        let disc = Discriminant::of_radicand(&nb).unwrap();
        let mut f = QForm::principal(&nb);
        for m in 0..=2 * exp.tau as usize {
            let want = QForm {
                a: signed(m, exp.q(m)),
                b: BigInt::from(exp.p(m + 1).clone()) << 1u32,
                c: signed(m + 1, exp.q(m + 1)),
            };
            assert_eq!(f, want, "n = {n}, m = {m}");
            assert!(disc.is_reduced(&f));
            f = disc.rho(&f).unwrap();
        }
    }
}

#[test]
fn reduced_form_bounds() {
    for n in common::odd_nonsquare(2000) {
        let disc = Discriminant::of_radicand(&BigUint::from(n)).unwrap();
        let half_ln = 0.5 * disc.ln();
        for f in cycle(n) {
            let s2 = disc.value();
            assert!(&f.a * &f.a < *s2 && &f.b * &f.b < *s2 && &f.c * &f.c < *s2);
            assert!(f.a.sign() != f.c.sign());
            let d1 = disc.delta(&f);
            let next = disc.rho(&f).unwrap();
            assert!(d1 > 0.0 && d1 < half_ln, "n = {n}");
            assert!(d1 + disc.delta(&next) > std::f64::consts::LN_2);
            assert!(disc.is_reduced(&next));
            assert_eq!(next.discriminant(), *s2);
        }
    }
}

#[test]
fn composition_stays_in_cycle() {
    for n in [21u64, 77, 203, 1001, 4757, 11021] {
        let disc = Discriminant::of_radicand(&BigUint::from(n)).unwrap();
        let cyc = principal_cycle(&BigUint::from(n), None).unwrap();
        let forms: Vec<QForm> = cyc[..cyc.len() - 1].iter().map(|d| d.form.clone()).collect();
        let limit = 2.0 * disc.ln();
        for f in &cyc[..cyc.len() - 1] {
            for g in &cyc[..cyc.len() - 1] {
                let composed = disc.compose(&f.form, &g.form).unwrap();
                assert_eq!(composed.discriminant(), *disc.value());
                let (out, info) = disc.giant_step(f, g).unwrap();
                assert!(forms.contains(&out.form), "n = {n}");
                assert!(info.correction.abs() < limit);
            }
        }
    }
}

/// A reduced form for `Δ = 4n` from the principal cycle of `n`.
fn arb_cycle_form() -> impl Strategy<Value = (u64, QForm)> {
    (3u64..20_000)
        .prop_filter("odd nonsquare", |n| n % 2 == 1 && !common::is_square(*n))
        .prop_flat_map(|n| {
            let c = cycle(n);
            let len = c.len();
            (Just(n), Just(c), 0..len)
        })
        .prop_map(|(n, c, i)| (n, c[i].clone()))
}

proptest! {
    #[test]
    fn rho_and_inverse_cancel((n, f) in arb_cycle_form()) {
        let disc = Discriminant::of_radicand(&BigUint::from(n)).unwrap();
        prop_assert_eq!(disc.rho(&disc.rho_inv(&f).unwrap()).unwrap(), f.clone());
        prop_assert_eq!(disc.rho_inv(&disc.rho(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn rho_preserves_discriminant(a in -5000i64..5000, c in -5000i64..5000, t in -300i64..300) {
        let n = t * t - a * c;
        prop_assume!(a != 0 && c != 0 && n > 1 && !common::is_square(n as u64));
        let (delta, b) = (4 * n, 2 * t);
        let disc = Discriminant::new(delta.into()).unwrap();
        let f = QForm::new(a, b, c);
        let g = disc.rho(&f).unwrap();
        prop_assert_eq!(g.discriminant(), BigInt::from(delta));
        let red = disc.reduce(&f).unwrap();
        prop_assert!(disc.is_reduced(&red.form));
        let c_abs = c.unsigned_abs() as f64;
        let root = (delta as f64).sqrt();
        if c_abs > root {
            let bound = 2.0 + (c_abs / root).log2().ceil();
            prop_assert!(red.steps as f64 <= bound, "steps {} bound {}", red.steps, bound);
        }
    }

    #[test]
    fn giant_step_is_additive((n, f) in arb_cycle_form(), k in 0usize..64) {
        let nb = BigUint::from(n);
        let disc = Discriminant::of_radicand(&nb).unwrap();
        let cyc = principal_cycle(&nb, None).unwrap();
        let r = cyc.last().unwrap().dist;
        let i = cyc.iter().position(|d| d.form == f).unwrap();
        let g = &cyc[k % (cyc.len() - 1)];
        let (out, _) = disc.giant_step(&cyc[i], g).unwrap();
        let j = cyc.iter().position(|d| d.form == out.form).unwrap();
        // Distances agree modulo the regulator.
        let diff = (out.dist - cyc[j].dist).rem_euclid(r);
        prop_assert!(diff.min(r - diff) < 1e-9 * r.max(1.0), "diff {}", diff);
    }
}

#[test]
fn squaring_grows_distance() {
    let n = BigUint::from(1_000_003u64 * 1_000_033);
    let disc = Discriminant::of_radicand(&n).unwrap();
    let g0 = regfac_core::factor::build_base_form(&n).unwrap();
    let l4 = (4.0 * 1_000_003f64 * 1_000_033f64).ln();
    let mut g: DistForm = g0;
    for i in 1..12 {
        g = disc.giant_step(&g, &g).unwrap().0;
        assert!(g.dist > 2f64.powi(i) + 2.0 * l4, "i = {i}");
    }
}
