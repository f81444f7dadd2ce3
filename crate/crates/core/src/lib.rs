#![no_std]

extern crate alloc;

pub mod asymnorm;
pub mod error;
pub mod exactlin;
pub mod fixtures;
pub mod hodgenum;
pub mod l2decide;
pub mod lattice;
pub mod monodromy;
pub mod numeric;
pub mod quadrature;
pub mod weight;

pub use error::{Error, Result};
