//! Higher-order lower directional derivatives of Hadamard type, the matching
//! subdifferentials, and point classification built on them.

pub mod classify;
pub mod deriv;
pub mod error;
pub mod extreal;
pub mod funcspec;
pub mod invex;
pub mod probe;
pub mod subdiff;

pub use error::{Error, Result};
pub use extreal::ExtReal;
