pub mod alexander;
pub mod bns;
pub mod corpus;
pub mod error;
pub mod fiber;
pub mod gbs;
pub mod hierarchy;
pub mod input;
pub mod poly;
pub mod snf;
pub mod torus;
pub mod words;

pub use error::{Error, Result};
pub use words::{FreeAutomorphism, IntMatrix, Word};
