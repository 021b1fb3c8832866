//! Streaming algorithms for maximum-weight k-matching.

pub mod dynamic;
pub mod error;
pub mod harness;
pub mod hash;
pub mod insert_only;
pub mod matching;
pub mod partition;
pub mod sampler;
pub mod stream;

pub use error::{Error, Result};
