//! Invariants of p-adic fields and of elliptic curves with good reduction
//! that control the ramified part of the abelian geometric fundamental
//! group, together with the resulting upper and lower bounds.

pub mod bounds;
pub mod cli;
pub mod corpus;
pub mod elliptic;
pub mod error;
pub mod fp;
pub mod galmod;
pub mod localfield;
pub mod selftest;
pub mod unitsymbols;

pub use error::{Error, Result};
