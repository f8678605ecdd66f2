//! Trace coordinates for SL(3) representations of free groups.
//!
//! Words and cyclic keys live in [`word`], matrices and sampling in [`mat3`],
//! trace polynomials in [`trpoly`]. The rewrite engine is [`reducer`].

pub mod mat3;
pub mod trpoly;
pub mod word;
pub mod identities;
pub mod relmat;
pub mod fpoly;
pub mod reducer;
pub mod generators;
pub mod embed;
pub mod verify;
pub mod cli;
