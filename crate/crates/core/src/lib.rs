//! Regulator-assisted factorization of odd composite integers.
//!
//! The crate walks the principal cycle of reduced binary quadratic forms of
//! discriminant `4N`, measures positions along it with the infrastructure
//! distance, and uses Gauss composition to jump close to the symmetry point of
//! the cycle, where the central coefficient shares a factor with `N`.
//!
//! Layout:
//!
//! * [`cf`]: continued fraction of `√N`, the `P`/`Q` sequences and convergents.
//! * [`zsqrt`]: exact arithmetic in `ℤ[√N]`, used to state identities.
//! * [`classify`]: period parity and central-term predictions from congruences.
//! * [`qform`]: forms, `ρ`/`ρ⁻¹`, reduction, composition, distance, giant steps.
//! * [`regulator`]: `R⁺(N)` by cycle traversal, and external multiples of it.
//! * [`factor`]: the small-regulator scan, the giant-step search and the
//!   dispatcher.
//!
//! Everything here is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod arith;
pub mod cf;
pub mod classify;
mod error;
pub mod factor;
pub mod primes;
pub mod qform;
pub mod regulator;
pub mod zsqrt;

pub use arith::{isqrt, ln_biguint, perfect_square_root, DistanceSum};
pub use cf::{cf_step, convergents, expand_sqrt, sum_two_squares, Convergent, Expansion, QuadIrrState};
pub use classify::{predict_central, predict_parity, CentralPrediction, ParityPrediction};
pub use error::{Error, Result};
pub use factor::{factor, FactorConfig, FactorOutcome, FactorResult, RegulatorSource};
pub use qform::{Discriminant, DistForm, QForm};
pub use regulator::{accept_external, regulator_traverse, RegulatorKind, RegulatorValue};
