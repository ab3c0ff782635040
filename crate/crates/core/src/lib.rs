//! Exact computations around p-rational number fields, uniform pro-p groups
//! with fixed-point-free automorphisms, and Iwasawa mu-invariants.
//!
//! Each module is usable on its own; `suite` strings them together into the
//! verification battery exposed by the `mutower paper-suite` command.

pub mod arith;
pub mod census;
pub mod characters;
pub mod error;
pub mod ff;
pub mod iwasawa;
pub mod numberfield;
pub mod padic;
pub mod prationality;
pub mod propgroups;
pub mod report;
pub mod snf;
pub mod suite;

pub use error::{Error, Result};
