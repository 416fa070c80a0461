//! Arithmetic of special values over `F_q[θ]`: Carlitz constants, power sums,
//! multiple zeta and polylog values, and Anderson-module verification.

pub mod error;
pub mod field;
pub mod series;
pub mod tate;
pub mod apoly;
pub mod constants;
pub mod power_sums;
pub mod mzv;
pub mod anderson;
pub mod canon;
pub mod config;
pub mod report;
pub mod harness;
pub mod selftest;

pub use error::{Error, Result};
pub use field::{Context, Fe, FieldParams, Precision};
pub use series::RamifiedSeries;
