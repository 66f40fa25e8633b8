//! Indefinite binary quadratic forms `ax² + bxy + cy²`.
//!
//! All decisions (reducedness, the window for `ρ`) are made with exact
//! integer comparisons. Floating point only enters through the distance
//! `δ(F, ρF)`.

use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{ExtendedGcd, Integer};
use num_traits::{One, Signed, Zero};

use crate::arith::{isqrt, perfect_square_root, step_distance, DistanceSum, Scaled};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl QForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        QForm {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    /// `(1, 2a₀, a₀² − n)` with `a₀ = ⌊√n⌋`: the reduced form of
    /// discriminant `4n` with leading coefficient 1.
    pub fn principal(n: &BigUint) -> Self {
        let a0 = BigInt::from(isqrt(n));
        let c = &a0 * &a0 - BigInt::from(n.clone());
        QForm {
            a: BigInt::one(),
            b: a0 << 1u32,
            c,
        }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - ((&self.a * &self.c) << 2u32)
    }
}

impl fmt::Display for QForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// `b² − 4ac`.
pub fn discriminant(f: &QForm) -> BigInt {
    f.discriminant()
}

/// A form together with its distance from the principal form.
#[derive(Debug, Clone, PartialEq)]
pub struct DistForm {
    pub form: QForm,
    pub dist: f64,
}

impl DistForm {
    pub fn new(form: QForm, dist: f64) -> Self {
        DistForm { form, dist }
    }
}

/// Outcome of [`Discriminant::reduce`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub form: QForm,
    pub steps: u64,
    /// `Σ δ(F, ρF)` over the forms `F` the reduction passed through.
    pub correction: f64,
}

/// Bookkeeping from one giant step.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GiantStepInfo {
    pub correction: f64,
    pub reductions: u64,
}

/// A positive nonsquare discriminant with its square root cached.
#[derive(Debug, Clone)]
pub struct Discriminant {
    value: BigInt,
    root: BigInt,
    sqrt: Scaled,
}

impl Discriminant {
    pub fn new(value: BigInt) -> Result<Self> {
        if value.sign() != Sign::Plus || perfect_square_root(value.magnitude()).is_some() {
            return Err(Error::BadDiscriminant);
        }
        let root = BigInt::from(isqrt(value.magnitude()));
        let sqrt = Scaled::sqrt_of(value.magnitude());
        Ok(Discriminant { value, root, sqrt })
    }

    /// `Δ = 4n`.
    pub fn of_radicand(n: &BigUint) -> Result<Self> {
        Self::new(BigInt::from(n.clone()) << 2u32)
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    /// `⌊√Δ⌋`.
    pub fn isqrt(&self) -> &BigInt {
        &self.root
    }

    pub fn ln(&self) -> f64 {
        crate::arith::ln_biguint(self.value.magnitude())
    }

    fn check(&self, f: &QForm) -> Result<()> {
        if f.discriminant() != self.value {
            return Err(Error::DiscriminantMismatch);
        }
        Ok(())
    }

    /// `|√Δ − 2|a|| < b < √Δ`.
    pub fn is_reduced(&self, f: &QForm) -> bool {
        let b = &f.b;
        if b.sign() != Sign::Plus || b * b >= self.value {
            return false;
        }
        let two_a = f.a.abs() << 1u32;
        let upper = b + &two_a;
        if self.value >= &upper * &upper {
            return false;
        }
        let lower = two_a - b;
        lower.sign() != Sign::Plus || self.value > &lower * &lower
    }

    /// The representative `r ≡ x (mod 2|m|)` in the window used by `ρ`:
    /// `−|m| < r ≤ |m|` when `√Δ < |m|`, otherwise `√Δ − 2|m| < r < √Δ`.
    fn window(&self, x: &BigInt, m: &BigInt) -> BigInt {
        let m_abs = m.abs();
        let modulus: BigInt = &m_abs << 1u32;
        if self.value < &m_abs * &m_abs {
            let t = x.mod_floor(&modulus);
            if t > m_abs {
                t - modulus
            } else {
                t
            }
        } else {
            // Largest r ≤ ⌊√Δ⌋ in the class; ⌊√Δ⌋ < √Δ since Δ is nonsquare.
            &self.root - (&self.root - x).mod_floor(&modulus)
        }
    }

    /// `ρ(a, b, c) = (c, r, (r² − Δ)/4c)` with `r ≡ −b (mod 2c)`.
    pub fn rho(&self, f: &QForm) -> Result<QForm> {
        if f.a.is_zero() || f.c.is_zero() {
            return Err(Error::ZeroCoefficient);
        }
        let r = self.window(&-&f.b, &f.c);
        let c_next = (&r * &r - &self.value) / (&f.c << 2u32);
        Ok(QForm {
            a: f.c.clone(),
            b: r,
            c: c_next,
        })
    }

    /// `ρ⁻¹(a, b, c) = ((r² − Δ)/4a, r, a)` with `r ≡ −b (mod 2a)`.
    pub fn rho_inv(&self, f: &QForm) -> Result<QForm> {
        if f.a.is_zero() {
            return Err(Error::ZeroCoefficient);
        }
        let r = self.window(&-&f.b, &f.a);
        let a_prev = (&r * &r - &self.value) / (&f.a << 2u32);
        Ok(QForm {
            a: a_prev,
            b: r,
            c: f.a.clone(),
        })
    }

    /// `δ(F, ρF) = ½ ln |(b + √Δ)/(b − √Δ)|`.
    pub fn delta(&self, f: &QForm) -> f64 {
        step_distance(&f.b, &self.value, self.sqrt)
    }

    /// Step cap for reducing `f`: well above the logarithmic bound.
    fn reduction_cap(f: &QForm) -> u64 {
        16 + 2 * (f.a.bits() + f.c.bits())
    }

    /// Applies `ρ` until the form is reduced.
    pub fn reduce(&self, f: &QForm) -> Result<Reduction> {
        self.check(f)?;
        let cap = Self::reduction_cap(f);
        let mut form = f.clone();
        let mut correction = DistanceSum::new();
        let mut steps = 0u64;
        while !self.is_reduced(&form) {
            if steps >= cap {
                return Err(Error::ReductionDiverged { steps });
            }
            correction.add(self.delta(&form));
            form = self.rho(&form)?;
            steps += 1;
        }
        Ok(Reduction {
            form,
            steps,
            correction: correction.value(),
        })
    }

    /// Gauss composition with Bézout witnesses from two extended gcds.
    pub fn compose(&self, f: &QForm, g: &QForm) -> Result<QForm> {
        self.check(f)?;
        self.check(g)?;
        let beta: BigInt = (&f.b + &g.b) >> 1u32;
        let ExtendedGcd { gcd: g1, x, y } = f.a.extended_gcd(&g.a);
        let ExtendedGcd { gcd: n, x: x2, y: v } = g1.extended_gcd(&beta);
        let (x2, v) = if n.is_negative() { (-x2, -v) } else { (x2, v) };
        self.compose_unchecked(f, g, &(&x * &x2), &(&y * &x2), &v)
    }

    /// Gauss composition with caller-chosen witnesses
    /// `a₁s + a₂u + βv = gcd(a₁, a₂, β)`, `β = (b₁ + b₂)/2`.
    pub fn compose_with(&self, f: &QForm, g: &QForm, s: &BigInt, u: &BigInt, v: &BigInt) -> Result<QForm> {
        self.check(f)?;
        self.check(g)?;
        let beta: BigInt = (&f.b + &g.b) >> 1u32;
        let n = f.a.gcd(&g.a).gcd(&beta);
        if &f.a * s + &g.a * u + &beta * v != n {
            return Err(Error::Invalid(alloc::string::String::from(
                "witnesses do not combine to gcd(a1, a2, beta)",
            )));
        }
        self.compose_unchecked(f, g, s, u, v)
    }

    fn compose_unchecked(&self, f: &QForm, g: &QForm, s: &BigInt, u: &BigInt, v: &BigInt) -> Result<QForm> {
        let (a1, b1, c1) = (&f.a, &f.b, &f.c);
        let (a2, b2, c2) = (&g.a, &g.b, &g.c);
        let beta: BigInt = (b1 + b2) >> 1u32;
        let n = a1 * s + a2 * u + &beta * v;
        if n.sign() != Sign::Plus {
            return Err(Error::ZeroCoefficient);
        }
        let half_diff: BigInt = (b1 - b2) >> 1u32;
        let d0 = n.gcd(c1).gcd(c2).gcd(&half_diff);
        let (a3, rem) = (a1 * a2 * &d0).div_rem(&(&n * &n));
        if !rem.is_zero() || a3.is_zero() {
            return Err(Error::NonIntegralComposition);
        }
        let two_a1_over_n = (a1 << 1u32) / &n;
        let b3 = b1 + two_a1_over_n * (s * ((b2 - b1) >> 1u32) - c1 * v);
        let (c3, rem) = (&b3 * &b3 - &self.value).div_rem(&(&a3 << 2u32));
        if !rem.is_zero() {
            return Err(Error::NonIntegralComposition);
        }
        Ok(QForm { a: a3, b: b3, c: c3 })
    }

    /// Composes, reduces, and adds the reduction correction to the distance.
    pub fn giant_step(&self, f: &DistForm, g: &DistForm) -> Result<(DistForm, GiantStepInfo)> {
        let composed = self.compose(&f.form, &g.form)?;
        let red = self.reduce(&composed)?;
        let mut dist = DistanceSum::starting_at(f.dist);
        dist.add(g.dist);
        dist.add(red.correction);
        Ok((
            DistForm {
                form: red.form,
                dist: dist.value(),
            },
            GiantStepInfo {
                correction: red.correction,
                reductions: red.steps,
            },
        ))
    }
}

fn context(f: &QForm) -> Result<Discriminant> {
    Discriminant::new(f.discriminant())
}

pub fn is_reduced(f: &QForm) -> Result<bool> {
    Ok(context(f)?.is_reduced(f))
}

pub fn rho(f: &QForm) -> Result<QForm> {
    context(f)?.rho(f)
}

pub fn rho_inv(f: &QForm) -> Result<QForm> {
    context(f)?.rho_inv(f)
}

/// Reduced form reached from `f` and the number of `ρ` steps taken.
pub fn reduce(f: &QForm) -> Result<(QForm, u64)> {
    let red = context(f)?.reduce(f)?;
    Ok((red.form, red.steps))
}

pub fn gauss_compose(f: &QForm, g: &QForm) -> Result<QForm> {
    if f.discriminant() != g.discriminant() {
        return Err(Error::DiscriminantMismatch);
    }
    context(f)?.compose(f, g)
}

/// `δ(F, ρF)`; defined whenever `b² ≠ Δ`, also for square `Δ`.
pub fn delta_step(f: &QForm) -> Result<f64> {
    let disc = f.discriminant();
    if disc.sign() != Sign::Plus {
        return Err(Error::BadDiscriminant);
    }
    if &f.b * &f.b == disc {
        return Err(Error::LogSingularity);
    }
    Ok(step_distance(&f.b, &disc, Scaled::sqrt_of(disc.magnitude())))
}

pub fn giant_step(f: &DistForm, g: &DistForm) -> Result<DistForm> {
    let disc = f.form.discriminant();
    if disc != g.form.discriminant() {
        return Err(Error::DiscriminantMismatch);
    }
    Ok(Discriminant::new(disc)?.giant_step(f, g)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn d84() -> Discriminant {
        Discriminant::new(84.into()).unwrap()
    }

    fn cycle_21() -> Vec<QForm> {
        let d = d84();
        let mut out = alloc::vec![QForm::principal(&BigUint::from(21u8))];
        for _ in 0..5 {
            let next = d.rho(out.last().unwrap()).unwrap();
            out.push(next);
        }
        out
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&QForm::new(1, 8, -5)), BigInt::from(84));
        assert_eq!(discriminant(&QForm::new(1, 0, 0)), BigInt::zero());
        assert_eq!(discriminant(&QForm::new(25, 122, 148)), BigInt::from(84));
    }

    #[test]
    fn reducedness_examples() {
        assert!(is_reduced(&QForm::new(1, 8, -5)).unwrap());
        assert!(!is_reduced(&QForm::new(1, 2, -20)).unwrap());
        assert_eq!(is_reduced(&QForm::new(1, 0, 0)), Err(Error::BadDiscriminant));
        assert_eq!(is_reduced(&QForm::new(1, 4, 4)), Err(Error::BadDiscriminant));
    }

    /// Float oracle for reducedness, safe for small coefficients.
    fn reduced_by_float(f: &QForm, disc: f64) -> bool {
        let s = disc.sqrt();
        let a = num_traits::ToPrimitive::to_f64(&f.a).unwrap();
        let b = num_traits::ToPrimitive::to_f64(&f.b).unwrap();
        (s - 2.0 * a.abs()).abs() < b && b < s
    }

    #[test]
    fn reducedness_matches_float_oracle() {
        for disc in [84i64, 60, 29 * 4, 4 * 1001] {
            let d = Discriminant::new(disc.into()).unwrap();
            for a in -70i64..=70 {
                if a == 0 {
                    continue;
                }
                for b in -70i64..=70 {
                    if (b * b - disc) % (4 * a) != 0 {
                        continue;
                    }
                    let f = QForm::new(a, b, (b * b - disc) / (4 * a));
                    assert_eq!(d.is_reduced(&f), reduced_by_float(&f, disc as f64), "{f}");
                }
            }
        }
    }

    #[test]
    fn rho_examples() {
        let d = d84();
        let p = QForm::new(1, 8, -5);
        assert_eq!(d.rho(&p).unwrap(), QForm::new(-5, 2, 4));
        assert_eq!(d.rho_inv(&QForm::new(-5, 2, 4)).unwrap(), p);
        let mut f = p.clone();
        let mut g = p.clone();
        for _ in 0..6 {
            f = d.rho(&f).unwrap();
            g = d.rho_inv(&g).unwrap();
        }
        assert_eq!(f, p);
        assert_eq!(g, p);
        assert_eq!(d.rho(&QForm::new(0, 10, 3)), Err(Error::ZeroCoefficient));
        assert_eq!(d.rho_inv(&QForm::new(0, 10, 3)), Err(Error::ZeroCoefficient));
        assert_eq!(rho(&QForm::new(0, 10, 3)), Err(Error::BadDiscriminant));
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(&QForm::new(1, 8, -5)).unwrap(), (QForm::new(1, 8, -5), 0));
        let (g, steps) = reduce(&QForm::new(1, 2, -20)).unwrap();
        assert!(is_reduced(&g).unwrap());
        assert!(steps <= 4, "steps = {steps}");
        let (g, _) = reduce(&QForm::new(25, 122, 148)).unwrap();
        assert!(cycle_21().contains(&g));
    }

    #[test]
    fn composition_example() {
        let d = d84();
        let f = QForm::new(-5, 2, 4);
        let with = d.compose_with(&f, &f, &1.into(), &0.into(), &3.into()).unwrap();
        assert_eq!(with, QForm::new(25, 122, 148));
        assert!(d.compose_with(&f, &f, &1.into(), &0.into(), &2.into()).is_err());
        // Other witnesses give an equivalent form: same a, b ≡ 122 (mod 2a).
        let ours = gauss_compose(&f, &f).unwrap();
        assert_eq!(ours.a, BigInt::from(25));
        assert!((&ours.b - BigInt::from(122)).mod_floor(&BigInt::from(50)).is_zero());
        let cyc = cycle_21();
        assert!(cyc.contains(&d.reduce(&ours).unwrap().form));
        assert!(cyc.contains(&d.reduce(&with).unwrap().form));
        assert_eq!(
            gauss_compose(&f, &QForm::new(1, 10, 3)),
            Err(Error::DiscriminantMismatch)
        );
    }

    #[test]
    fn principal_acts_as_identity_on_cycle() {
        let d = d84();
        let cyc = cycle_21();
        for f in &cyc {
            for g in &cyc {
                let red = d.reduce(&d.compose(f, g).unwrap()).unwrap();
                assert!(cyc.contains(&red.form), "{f} * {g}");
            }
        }
    }

    #[test]
    fn delta_values() {
        // Oracle: ½ ln((8 + √84)/(√84 − 8)) = atanh(8/√84).
        let want = libm::atanh(8.0 / libm::sqrt(84.0));
        let got = delta_step(&QForm::new(1, 8, -5)).unwrap();
        assert!((got - want).abs() < 1e-14);
        assert!((got - 1.345_015_109_779_853).abs() < 1e-14);
        assert_eq!(delta_step(&QForm::new(1, 0, -21)).unwrap(), 0.0);
        assert_eq!(delta_step(&QForm::new(1, 4, 0)), Err(Error::LogSingularity));
        let d = d84();
        let total: f64 = cycle_21().iter().map(|f| d.delta(f)).sum::<DistanceSum>().value();
        let want = libm::log(55.0 + 12.0 * libm::sqrt(21.0));
        assert!((total - want).abs() < 1e-13, "{total} vs {want}");
    }

    #[test]
    fn giant_step_examples() {
        let d = d84();
        let cyc = cycle_21();
        let mut dists = alloc::vec![0.0];
        for f in &cyc[..5] {
            let last = *dists.last().unwrap();
            dists.push(last + d.delta(f));
        }
        let g1 = DistForm::new(cyc[1].clone(), dists[1]);
        let (sq, info) = d.giant_step(&g1, &g1).unwrap();
        assert!(cyc.contains(&sq.form));
        assert!(info.correction.abs() < 2.0 * d.ln());
        assert!((sq.dist - 2.0 * dists[1]).abs() < 2.0 * d.ln());
        let zero = DistForm::new(cyc[0].clone(), 0.0);
        let g3 = DistForm::new(cyc[3].clone(), dists[3]);
        let out = giant_step(&g3, &zero).unwrap();
        assert!((out.dist - dists[3]).abs() < 2.0 * d.ln());
    }
}
