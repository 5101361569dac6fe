pub mod error;
pub mod linalg;
pub mod lmg;
pub mod measures;
pub mod quadrature;
pub mod states;
pub mod sweep;
pub mod validation;
pub mod xxz;

pub use error::{Error, Result};
