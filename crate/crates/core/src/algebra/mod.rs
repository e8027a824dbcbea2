//! Exact finite-field arithmetic and linear algebra.

pub mod field;
pub mod matrix;

pub use field::{FieldElement, FieldSpec, MAX_FIELD_ORDER};
pub use matrix::{solve_row_system, Matrix, Rref};
