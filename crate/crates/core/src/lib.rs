#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod analysis;
pub mod cli;
pub mod error;
pub mod perturbation;
pub mod potential;
pub mod quad;
pub mod quantizer;
pub mod roots;
pub mod schrodinger;
pub mod specfun;
pub mod zeros;

pub use error::{Error, Result};
