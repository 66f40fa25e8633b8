//! Integer square roots, logarithms of big integers and compensated sums.

use core::f64::consts::LN_2;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

/// `⌊√n⌋`.
pub fn isqrt(n: &BigUint) -> BigUint {
    n.sqrt()
}

/// `Some(r)` when `n = r²`.
pub fn perfect_square_root(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// A positive real `mant · 2^exp`, wide enough for any big integer.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Scaled {
    mant: f64,
    exp: i64,
}

impl Scaled {
    pub(crate) fn from_biguint(x: &BigUint) -> Self {
        let bits = x.bits();
        if bits <= 64 {
            Scaled {
                mant: x.to_u64().unwrap_or(u64::MAX) as f64,
                exp: 0,
            }
        } else {
            let shift = bits - 64;
            let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
            Scaled {
                mant: top as f64,
                exp: shift as i64,
            }
        }
    }

    /// `√x` with about 64 correct bits.
    pub(crate) fn sqrt_of(x: &BigUint) -> Self {
        let bits = x.bits() as i64;
        // Shift so the radicand holds ~130 bits; the root then carries ~65.
        let k = (130 - bits).div_euclid(2);
        let shifted = if k >= 0 {
            x << (2 * k) as u64
        } else {
            x >> (-2 * k) as u64
        };
        let mut root = Scaled::from_biguint(&shifted.sqrt());
        root.exp -= k;
        root
    }

    pub(crate) fn ln(self) -> f64 {
        libm::log(self.mant) + self.exp as f64 * LN_2
    }

    /// `self / other` as a plain float (may under- or overflow to 0 / ∞).
    pub(crate) fn ratio(self, other: Scaled) -> f64 {
        let diff = (self.exp - other.exp).clamp(i32::MIN as i64, i32::MAX as i64) as i32;
        libm::ldexp(self.mant / other.mant, diff)
    }

    pub(crate) fn mul(self, other: Scaled) -> Scaled {
        Scaled {
            mant: self.mant * other.mant,
            exp: self.exp + other.exp,
        }
    }
}

/// Natural logarithm of a positive big integer, to double precision.
///
/// Returns `-∞` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    Scaled::from_biguint(x).ln()
}

/// `½ ln |(b + √Δ)/(b − √Δ)|`, the distance of one `ρ` step from a form with
/// middle coefficient `b`.
///
/// `sqrt_disc` is `√Δ` and `b² ≠ Δ` is assumed. When `|b|` and `√Δ` are
/// close the quotient is rewritten with the exact integer `|b² − Δ|` so no
/// cancellation happens.
pub(crate) fn step_distance(b: &BigInt, disc: &BigInt, sqrt_disc: Scaled) -> f64 {
    if b.is_zero() {
        return 0.0;
    }
    let mag = Scaled::from_biguint(b.magnitude());
    let below = b.magnitude() * b.magnitude() < *disc.magnitude();
    let x = if below {
        mag.ratio(sqrt_disc)
    } else {
        sqrt_disc.ratio(mag)
    };
    let value = if x < 0.5 {
        libm::atanh(x)
    } else {
        let larger = if below { sqrt_disc } else { mag };
        let gap: BigInt = b * b - disc;
        larger.ln() + libm::log1p(x) - 0.5 * ln_biguint(gap.magnitude())
    };
    if b.sign() == Sign::Minus {
        -value
    } else {
        value
    }
}

/// The same step distance for `b = 2P`, `Δ = 4N` with machine-word inputs.
///
/// `gap` is `N − P² = Q_m·Q_{m−1}`.
pub(crate) fn step_distance_u64(p: u64, gap: u64, sqrt_n: f64) -> f64 {
    let x = p as f64 / sqrt_n;
    if x < 0.5 {
        libm::atanh(x)
    } else {
        libm::log(sqrt_n + p as f64) - 0.5 * libm::log(gap as f64)
    }
}

/// Compensated (Neumaier) summation of distances.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DistanceSum {
    sum: f64,
    comp: f64,
}

impl DistanceSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn starting_at(value: f64) -> Self {
        DistanceSum { sum: value, comp: 0.0 }
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl core::iter::Sum<f64> for DistanceSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = DistanceSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// `ln(p + q√n)` for positive `p`, `q`, evaluated as `ln p + ln(1 + q√n/p)`.
pub(crate) fn ln_p_plus_q_sqrt(p: &BigUint, q: &BigUint, n: &BigUint) -> f64 {
    let ps = Scaled::from_biguint(p);
    if q.is_zero() {
        return ps.ln();
    }
    let qs = Scaled::from_biguint(q).mul(Scaled::sqrt_of(n));
    if p.is_zero() {
        return qs.ln();
    }
    ps.ln() + libm::log1p(qs.ratio(ps))
}
