//! High-precision evaluation of the Sp(4) zeta function over Q and its
//! auxiliary functions, zero analysis in the critical strip, and a symbolic
//! Weyl-group engine deriving the closed form from Eisenstein periods.

pub mod error;
pub mod precision;
pub mod sp4;
pub mod special;
pub mod weyl;
pub mod zeros;

pub use error::{Error, Result};
pub use precision::{BigComplex, BigReal, PrecisionContext};
pub use sp4::FunctionId;
