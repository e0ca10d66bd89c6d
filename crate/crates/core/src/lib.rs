//! Integer partitions under the map P -> Q(P), the Jordan type of a generic
//! nilpotent matrix commuting with the Jordan matrix J_P.
//!
//! The crate computes Q(P) combinatorially through the Oblak recursion on the
//! poset D_P, builds the closed-form inverse-image tables for two-part targets
//! and the boxes for a few three-part families, and cross-checks all of it
//! with exact matrix arithmetic over a prime field.

pub mod boxes;
pub mod jordanlab;
pub mod partitions;
pub mod poset;
pub mod table;

pub use partitions::{Key, Partition};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
