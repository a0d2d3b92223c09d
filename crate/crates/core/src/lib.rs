//! Exact multigraded homological algebra over `S = K[x1..xd]` and the
//! exterior algebra `E` on `y1..yd`.
//!
//! Modules are finite, `Z^d`-graded and stored degree by degree; every
//! invariant is a rank computation over an exact field.

#[macro_use]
pub mod exactla;
pub mod error;
pub mod bgg;
pub mod cli;
pub mod emod;
pub mod grading;
pub mod harness;
pub mod smod;
pub mod wkoszul;

pub use error::{Error, Result};
