//! Exact arithmetic on the moduli space of genus-2 curves, viewed as the
//! weighted projective space `WP(2,4,6,10)`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs: parallel drivers, file formats and the command
//! line live in the `g2ml` companion crate.
//!
//! Layout:
//!
//! - [`wproj`]: weighted tuples, weighted gcds, normalization and heights.
//! - [`factor`]: integer factorization backing the weighted gcds.
//! - [`binform`] and [`igusa`]: binary sextics, transvectants and the
//!   invariants `[J2 : J4 : J6 : J10]`.
//! - [`loci`]: the split-Jacobian loci `L2`, `L3` and `L5`.
//! - [`enumerate`]: point counts and bounded-height enumeration.
//! - [`dataset`]: labeled records keyed by absolute invariants.
//! - [`ml`]: preprocessing, classifiers, clusterers and metrics.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod binform;
pub mod dataset;
pub mod enumerate;
pub mod error;
pub mod factor;
pub mod igusa;
pub mod known;
pub mod loci;
pub mod ml;
pub mod poly;
pub mod rng;
pub mod wproj;

pub use error::{Error, Result};

/// Arbitrary-precision rational used for every exact scalar in the crate.
pub type Rational = num_rational::BigRational;
