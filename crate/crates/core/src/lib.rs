//! Exact computation with rational geodesic currents on free groups, and
//! desk-scale orbit experiments for outer automorphisms acting on projectivized
//! currents.

pub mod currents;
pub mod dynamics;
mod error;
pub mod free_group;
pub mod rng;
pub mod trees;
pub mod whitehead;

pub use error::{Error, Result};

/// Exact rationals used for coefficients, counts, weights and lengths.
pub type Rational = num_rational::BigRational;
