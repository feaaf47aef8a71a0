pub mod cli;
pub mod error;
pub mod kernels;
pub mod output;
pub mod quadrature;
pub mod sampler;
pub mod specfun;
pub mod spectra;
pub mod statistics;
pub mod validation;

pub use error::{Error, Result};
