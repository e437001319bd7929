//! Pair correlation statistics for weighted families of logarithms in
//! arithmetic progressions.
//!
//! The crate covers the arithmetic layer (totient sieve, Mertens and Mirsky
//! congruence sums, Euler-product constants), the exact atomic pair
//! correlation measures, their closed-form limits, the geometric
//! reinterpretation through orthogeodesic lengths of modular curves, and a
//! verification suite tying all of them together.

pub mod arith;
pub mod cli;
pub mod error;
pub mod family;
pub mod limits;
pub mod measures;
pub mod modular;
pub mod numeric;
pub mod verify;

pub use error::{Error, Result};
