//! Exact algebra behind the reduction of linear code equivalence to polynomial
//! isomorphism: finite fields, codes, projective point sets, canonical modules and
//! ideals, Macaulay inverse systems, reductions, and brute-force oracles.

#![no_std]

extern crate alloc;

pub mod canonical;
pub mod code;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod macaulay;
pub mod oracle;
pub mod points;
pub mod poly;
pub mod reduce;

pub use error::{Error, Result};
