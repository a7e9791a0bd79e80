//! Exact Buchsbaum-Rim coefficients, fiber multiplicities and reduction
//! numbers for direct sums of monomial ideals over monomial local rings.

pub mod checks;
pub mod error;
pub mod growth;
pub mod invariants;
mod num_json;
pub mod ring;
pub mod runner;
pub mod script;
pub mod sweep;

pub use error::{Error, Result};
pub use ring::{Ideal, Ring};
