//! Reduced words, conjugacy classes and automorphisms of the free group `F_N`.
//!
//! Letters are signed generator indices (`i` is `a_i`, `-i` is `a_i⁻¹`) and are
//! spelled `a..z` / `A..Z` in text.

mod automorphism;
pub mod catalog;
mod cyclic;
mod word;

pub use automorphism::{verify_inverse, Automorphism, AutomorphismDoc};
pub use cyclic::{conjugate_equal, cyclic_reduce, CyclicWord};
pub use word::{letter_char, Letter, Word, MAX_RANK};

pub(crate) use cyclic::canonical_rotation;
pub(crate) use word::{ensure_same_rank, free_reduce, invert_letters};
