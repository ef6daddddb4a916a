#![no_std]

extern crate alloc;

pub mod error;
pub mod games;
pub mod info;
pub mod lp;
pub mod protocol;
pub mod random;
pub mod rational;
pub mod roundelim;
pub mod tensor;

pub use error::{Error, Result};
