#![no_std]

extern crate alloc;

pub mod assembler;
pub mod error;
pub mod ffield;
pub mod geometry;
pub mod numtheory;
pub mod orbits;
pub mod perm;
pub mod witt;

pub use error::{Error, ErrorClass, Result};
