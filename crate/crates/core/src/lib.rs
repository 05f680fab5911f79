//! Exact factorisation machinery for generalised power series with non-positive exponents.

pub mod error;
pub mod exponents;
pub mod factor;
pub mod grpalg;
pub mod ordinal;
pub mod rat;
pub mod cli;
pub mod rvcore;
pub mod series;
pub mod supcomp;

pub use error::{HahnError, Result};
