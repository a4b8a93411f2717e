//! Exact boson normal ordering and the combinatorics that falls out of it.
//!
//! The crate is `no_std` (it needs `alloc`). It provides:
//!
//! * [`operator`]: words over `{a, a†}`, their normal forms under `[a, a†] = 1`,
//!   and powers of the monomial `(a†)^r a^s`;
//! * [`stirling`]: generalized Stirling numbers `S_{r,s}(n,k)` and Bell numbers
//!   `B_{r,s}(n)`, with closed forms for `(r,r)` and `(2,1)`;
//! * [`dobinski`]: Dobiński-type series for `B_{r,s}(n)` with certified bounds;
//! * [`genfunc`]: truncated formal power series and the normal-ordered
//!   exponential identities;
//! * [`measures`]: discrete and continuous measures whose power moments are
//!   Bell numbers.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod combinat;
pub mod dobinski;
mod error;
pub mod genfunc;
pub mod measures;
pub mod operator;
pub mod real;
pub mod stirling;

pub use error::{Error, Result};
pub use operator::{BosonWord, Letter, MonomialSpec, NormalForm};
pub use real::ErrorBoundedReal;
