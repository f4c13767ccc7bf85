//! Exact construction and certification of linear monads on products of
//! projective spaces.

pub mod certify;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod monad;
pub mod polyring;
pub mod selftest;
mod serde_util;
pub mod space;

pub use error::{Error, Result};
