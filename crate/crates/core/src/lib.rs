//! Monotone SNP sentences, forbidden-substructure classes and the amalgamation
//! property.
//!
//! The crate is organised around four pieces:
//!
//! * [`structure`]: finite relational structures, embeddings, canonical codes
//!   and isomorphism-free enumeration.
//! * [`logic`]: the sentence language, its parser and printer, and syntactic
//!   classification (monotone, monadic, guarded, connected).
//! * [`amalgamation`]: forbidden families, one-point amalgamation diagrams and
//!   the bounded decision procedure for the amalgamation property.
//! * [`rewrites`] and [`eval`]: sentence transformations and a finite-model
//!   evaluator used to check them.

pub mod amalgamation;
pub mod error;
pub mod eval;
mod lexer;
pub mod logic;
pub mod rewrites;
pub mod structure;

pub use error::{Error, Result};
pub use structure::{Signature, Structure, Symbol};
