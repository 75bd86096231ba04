//! Certified enclosures of harmonic-number approximations and their sharp
//! bounds, with exact replay of the supporting polynomial identities.

pub mod approx;
pub mod cli;
pub mod enclosure;
pub mod error;
pub mod exact;
pub mod verify;

pub use error::{Error, Result};
