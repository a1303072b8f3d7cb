//! Exact Fourier coefficients of holomorphic Siegel Eisenstein series of arbitrary genus,
//! their semi-ordinary p-stabilization, and the Lambda-adic family interpolating them.
//!
//! Everything is exact: rationals, cyclotomic numbers, and p-adic integers with explicit
//! precision. Each closed formula comes with an independent brute-force route in the tests.

pub mod characters;
pub mod eisenstein;
pub mod error;
pub mod exactnum;
pub mod lambda_adic;
pub mod lvalues;
pub mod quadforms;
pub mod siegelseries;

pub use error::{Error, Result};
