//! Exact-arithmetic core for computing the desk-checkable objects attached to
//! lifts from elliptic newforms to the 27-dimensional exceptional domain:
//! integral octonions and the exceptional Jordan algebra, local coefficient
//! constants, Siegel-polynomial plumbing, assembled Fourier coefficients, and
//! the E7 root data behind the degree-56/degree-133 Euler-factor identities.
//!
//! Everything in this crate is pure and allocation-only (`no_std` + `alloc`);
//! IO, file formats and the command-line surface live in the companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod archimedean;
pub mod coeff;
pub mod jordan;
pub mod lie;
pub mod lift;
pub mod newform;
pub mod octonion;
pub mod scalar;
pub mod siegel;

pub use scalar::{Int, Rational, Scalar};
