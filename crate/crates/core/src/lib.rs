//! Toeplitz determinants, Fisher-Hartwig asymptotics and XY chain correlators.

pub mod error;
pub mod fh_engine;
pub mod fourier;
pub mod quadrature;
pub mod specfun;
pub mod symbol;
pub mod toeplitz;
pub mod xy_chain;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
