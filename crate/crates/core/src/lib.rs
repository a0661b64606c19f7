//! Certification of Laguerre–Pólya class I membership for entire functions
//! with positive Taylor coefficients.

pub mod constants;
pub mod criteria;
pub mod error;
pub mod real;
pub mod series;
pub mod zeros;

pub use error::{Error, Result};
pub use real::{Cplx, Precision, Real};
