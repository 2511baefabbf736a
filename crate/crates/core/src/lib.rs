//! Component-by-component digit-by-digit (CBC-DBD) construction of rank-1
//! lattice rules with `N = 2^n` points.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the numerics:
//!
//! * [`weights`]: product, POD, general and shifted weight families.
//! * [`lattice`]: lattice points, the decay function `r_{α,γ}`, the
//!   brute-force truncated error `T_{α,γ}`, the sine-log sum `H_{s,n,γ}`,
//!   the closed-form error for even smoothness and plain QMC evaluation.
//! * [`quality`]: the digit-wise quality function, evaluated by direct
//!   subset enumeration or through the POD/product accumulator tables.
//! * [`construct`]: the generic construction and the fast POD and product
//!   variants.
//! * [`bounds`]: right-hand sides of the error and `H` estimates, and
//!   checkers that compare them against exactly computed quantities.
//!
//! File formats, randomized campaigns, timing and the command-line front end
//! live in the companion `cbcdbd` crate.
//!
//! Throughout, `log` is the natural logarithm and components are numbered
//! from 1, as are digit levels.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod construct;
mod digest;
mod error;
pub mod lattice;
pub mod quality;
mod subset;
mod sums;
pub mod weights;

pub use error::{Error, Result};
pub use subset::Subset;

/// Largest supported digit count `n` (so `N = 2^n` stays exactly
/// representable when dividing lattice coordinates).
pub const MAX_DIGITS: u32 = 52;

/// Enumeration limits shared by every operation that may blow up
/// combinatorially.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest dimension over which subsets may be enumerated.
    pub subset_cap: usize,
    /// Largest number of candidate frequency vectors `(2N-1)^s` the
    /// brute-force truncated error may visit.
    pub brute_force_budget: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            subset_cap: 20,
            brute_force_budget: 100_000_000,
        }
    }
}

impl Limits {
    pub(crate) fn check_subsets(&self, dimension: usize) -> Result<()> {
        let cap = self.subset_cap.min(Subset::MAX_COMPONENT);
        if dimension > cap {
            Err(Error::EnumerationCap { dimension, cap })
        } else {
            Ok(())
        }
    }
}
