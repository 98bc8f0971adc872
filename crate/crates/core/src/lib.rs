pub mod algebra;
pub mod arith;
pub mod characters;
pub mod error;
pub mod group;
pub mod lfunctions;
pub mod mds;
pub mod numerics;
pub mod sieve;

pub use error::{Error, Result};
