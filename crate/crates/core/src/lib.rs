//! Private computation over replicated and systematically encoded data.
//!
//! This crate implements two T-private computation schemes built on star
//! (Schur) products of linear codes, together with the finite-field and
//! coding machinery they need and an exact, enumeration-based privacy
//! auditor:
//!
//! * [`scheme::replicated`] — arbitrary-function computation on data
//!   replicated across N servers, any T of which may collude, at download
//!   rate (N−T)/N.
//! * [`scheme::systematic`] — polynomial computation on the columns of a
//!   systematically encoded data matrix, decoding in the response code
//!   E = C^{⋆G} ⋆ D with rate F/N where F = min{D_E−1, K}.
//! * [`privacy`] — exact joint-distribution enumeration deciding whether
//!   colluding subsets learn anything about the requested functions.
//! * [`simnet`] — a deterministic in-process server fleet with transcript
//!   recording, replay, and upload/download accounting.
//!
//! All arithmetic is exact; rates and probabilities are rationals, never
//! floats.

pub mod algebra;
pub mod codes;
pub mod config;
pub mod error;
pub mod polyspace;
pub mod privacy;
pub mod scheme;
pub mod simnet;
pub mod transcript;

pub use algebra::{FieldElement, FieldSpec, Matrix};
pub use codes::LinearCode;
pub use error::{Error, Result};
pub use polyspace::{Monomial, Polynomial, QuerySpace};
