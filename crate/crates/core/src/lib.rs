//! Exact combinatorics of the DT/PT quiver wall-crossing.
//!
//! The crate models weights of the maximal torus of `GL(d)`, the zonotopes
//! `W(d)`, `V(d)`, `W^a(1, d)`, `V^a(1, d)` that index window generators, the
//! level and type invariants of a weight, enumeration of summand labels,
//! Borel-Weil-Bott straightening, and the extended ADHM potential.
//!
//! All arithmetic is exact over arbitrary-precision rationals.

pub mod adhm;
pub mod bwb;
pub mod cli;
pub mod error;
pub mod invariants;
pub mod lp;
pub mod polytope;
pub mod rational;
pub mod sod;
pub mod weight;

pub use error::{Error, ParseError, Result};
pub use rational::Q;
pub use weight::{Cocharacter, QuiverShape, Weight};
