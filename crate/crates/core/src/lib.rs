// Constants carry the digits of their published or computed values, and
// negated comparisons are used where NaN must fall to the rejecting branch.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod chaos;
pub mod cli;
pub mod error;
pub mod format;
pub mod pearson;
pub mod quad;
pub mod rng;
pub mod specfun;
pub mod stein;
pub mod verify;

pub use error::{Error, Result};
