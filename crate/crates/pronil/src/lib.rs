//! Pronilpotent quotients of omega-presented groups arising from primitive
//! substitutions.
//!
//! A primitive substitution, or more generally a suitable free-group
//! endomorphism, determines a profinite group presented by the relations
//! identifying each generator with the limit of its iterated images. This
//! crate computes a complete description of the maximal pronilpotent
//! quotient of that group: its rank over each prime, freeness properties,
//! return-word substitutions, and finite nilpotent quotients found by
//! search.

pub mod analysis;
pub mod error;
pub mod finquot;
pub mod lang;
pub mod matrix;
pub mod poly;
pub mod primes;
pub mod report;
pub mod returns;
pub mod words;

pub use error::{Error, Result};
