//! Exact computations with Sturmian factor simplices and the permutations
//! that order the fractional parts `{alpha}, {2 alpha}, ..., {n alpha}`.

pub mod cli;
pub mod error;
pub mod farey;
pub mod irrational;
pub mod matrep;
pub mod permtool;
pub mod sturmian;

pub use error::{Error, Result};
pub use irrational::IrrationalSlope;
pub use permtool::FracPermutation;
