//! Multiplicity covers of the nonzero points of `F_2^n` by affine subspaces.
//!
//! A `(k, d)`-cover is a multiset of codimension-`d` affine subspaces of
//! `F_2^n` covering every nonzero point at least `k` times and the origin at
//! most `k - 1` times; a `(k, d; s)`-cover covers the origin exactly `s`
//! times. This crate provides:
//!
//! * [`gf2`]: vectors, canonical subspaces and subspace enumeration,
//! * [`cover`]: the [`Cover`] multiset, exact verification and hyperplane
//!   restriction,
//! * [`construct`]: the explicit families,
//! * [`code`]: the correspondence between `(k, 1; 0)`-covers and binary
//!   linear codes, including the extended Golay code,
//! * [`bounds`]: closed-form bounds and a ledger that closes intervals for
//!   `f(n, k, d)` under the known recursions,
//! * [`solver`]: exact branch-and-bound minimisation.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod bounds;
pub mod code;
pub mod construct;
pub mod cover;
pub mod error;
pub mod exact;
pub mod gf2;
pub mod solver;

pub use code::LinearCode;
pub use cover::{ConstructionTag, Cover, CoverReport, Family};
pub use error::{Error, Result};
pub use gf2::{AffineSubspace, Canonical, GfVector};
