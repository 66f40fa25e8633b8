//! Exact arithmetic in `ℤ[√N]`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `x + y√N`; the radicand lives in the [`ZSqrt`] ring it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub x: BigInt,
    pub y: BigInt,
}

impl QuadInt {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        QuadInt {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn one() -> Self {
        QuadInt::new(BigInt::one(), BigInt::zero())
    }

    pub fn conj(&self) -> Self {
        QuadInt {
            x: self.x.clone(),
            y: -&self.y,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        QuadInt {
            x: &self.x * k,
            y: &self.y * k,
        }
    }

    pub fn neg(&self) -> Self {
        QuadInt {
            x: -&self.x,
            y: -&self.y,
        }
    }
}

/// The ring `ℤ[√N]` for a fixed `N`.
#[derive(Debug, Clone)]
pub struct ZSqrt {
    n: BigInt,
}

impl ZSqrt {
    pub fn new(n: impl Into<BigInt>) -> Self {
        ZSqrt { n: n.into() }
    }

    pub fn radicand(&self) -> &BigInt {
        &self.n
    }

    /// `√N + p`.
    pub fn sqrt_plus(&self, p: impl Into<BigInt>) -> QuadInt {
        QuadInt::new(p.into(), BigInt::one())
    }

    pub fn mul(&self, a: &QuadInt, b: &QuadInt) -> QuadInt {
        QuadInt {
            x: &a.x * &b.x + &self.n * &a.y * &b.y,
            y: &a.x * &b.y + &a.y * &b.x,
        }
    }

    pub fn pow(&self, base: &QuadInt, mut k: u32) -> QuadInt {
        let mut acc = QuadInt::one();
        let mut sq = base.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            k >>= 1;
            if k > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// Field norm `x² − N y²`.
    pub fn norm(&self, a: &QuadInt) -> BigInt {
        &a.x * &a.x - &self.n * &a.y * &a.y
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a QuadInt>) -> QuadInt {
        items.into_iter().fold(QuadInt::one(), |acc, q| self.mul(&acc, q))
    }
}
